#include "tvpce/match_paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tvpce/angles.hpp"

namespace tvpce {

namespace {

// Shortest augmenting path Hungarian algorithm for an n x m cost matrix with
// n <= m. Returns the column assigned to each row.
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost, std::size_t m)
{
    const std::size_t n = cost.size();
    const double inf = std::numeric_limits<double>::infinity();
    // 1-based potentials; column 0 is a virtual source.
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<std::size_t> owner(m + 1, 0), way(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        owner[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<bool> used(m + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = owner[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j])
                    continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (owner[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n);
    for (std::size_t j = 1; j <= m; ++j)
        if (owner[j] != 0)
            row_to_col[owner[j] - 1] = j - 1;
    return row_to_col;
}

} // namespace

double path_distance(const PathParams& a, const PathParams& b)
{
    return angular_distance(a.omega1, b.omega1) + angular_distance(a.omega2, b.omega2) +
           angular_distance(a.psi, b.psi) + angular_distance(a.varsigma, b.varsigma);
}

PathMatch match_paths(const ChannelParamSet& truth, const ChannelParamSet& estimate)
{
    PathMatch out;
    const std::size_t lt = truth.l(), le = estimate.l();
    const bool truth_rows = lt <= le;
    const std::size_t rows = truth_rows ? lt : le, cols = truth_rows ? le : lt;

    std::vector<std::vector<double>> cost(rows, std::vector<double>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            cost[i][j] = truth_rows ? path_distance(truth.paths[i], estimate.paths[j])
                                    : path_distance(truth.paths[j], estimate.paths[i]);

    std::vector<bool> truth_used(lt, false), est_used(le, false);
    if (rows > 0) {
        const auto assign = hungarian(cost, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            const std::size_t ti = truth_rows ? i : assign[i];
            const std::size_t ei = truth_rows ? assign[i] : i;
            out.pairs.emplace_back(ti, ei);
            truth_used[ti] = est_used[ei] = true;
        }
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    for (std::size_t i = 0; i < lt; ++i)
        if (!truth_used[i])
            out.unmatched_truth.push_back(i);
    for (std::size_t j = 0; j < le; ++j)
        if (!est_used[j])
            out.unmatched_estimate.push_back(j);

    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (const auto& [ti, ei] : out.pairs) {
        const auto& t = truth.paths[ti];
        const auto& e = estimate.paths[ei];
        out.cost += path_distance(t, e);
        s1 += std::pow(angular_distance(t.omega1, e.omega1), 2);
        s2 += std::pow(angular_distance(t.omega2, e.omega2), 2);
        s3 += std::pow(angular_distance(t.psi, e.psi), 2);
        s4 += std::pow(angular_distance(t.varsigma, e.varsigma), 2);
    }
    if (!out.pairs.empty()) {
        const auto n = static_cast<double>(out.pairs.size());
        out.rmse_omega1 = std::sqrt(s1 / n);
        out.rmse_omega2 = std::sqrt(s2 / n);
        out.rmse_psi = std::sqrt(s3 / n);
        out.rmse_varsigma = std::sqrt(s4 / n);
    }
    return out;
}

} // namespace tvpce
