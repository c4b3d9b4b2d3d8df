#include "tvpce/model_order.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tvpce {

namespace {

constexpr double eigen_floor = 1e-30;

// Singular values below N * eps * sigma_max are roundoff; their squares must
// all land on the same floor or the tail stops looking white.
double floor_ratio(double n)
{
    const double tol = n * std::numeric_limits<double>::epsilon();
    return std::max(eigen_floor, tol * tol);
}

} // namespace

std::size_t mdl_rank(const ComplexMatrix& m, std::vector<double>& eigenvalues)
{
    if (m.size() == 0)
        throw std::invalid_argument("mdl_rank: empty matrix");
    if (!m.allFinite())
        throw std::domain_error("mdl_rank: non-finite input");

    const auto p = static_cast<std::size_t>(std::min(m.rows(), m.cols()));
    const auto n = static_cast<double>(std::max(m.rows(), m.cols()));

    Eigen::BDCSVD<ComplexMatrix> svd(m);
    const auto& s = svd.singularValues();
    eigenvalues.assign(p, 0.0);
    for (std::size_t i = 0; i < p; ++i)
        eigenvalues[i] = s(static_cast<Eigen::Index>(i)) * s(static_cast<Eigen::Index>(i)) / n;
    const double lmax = eigenvalues.empty() ? 0.0 : eigenvalues.front();
    if (!(lmax > 0.0))
        return 0;
    for (auto& l : eigenvalues)
        l = std::max(l, floor_ratio(n) * lmax);

    // Tail sums from the smallest eigenvalue upwards.
    std::size_t best_k = 0;
    double best = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    double log_sum = 0.0;
    std::vector<double> score(p);
    for (std::size_t k = p; k-- > 0;) {
        sum += eigenvalues[k];
        log_sum += std::log(eigenvalues[k]);
        const double q = static_cast<double>(p - k);
        const double log_gm = log_sum / q;
        const double log_am = std::log(sum / q);
        const auto kk = static_cast<double>(k);
        score[k] = -n * q * (log_gm - log_am) + 0.5 * kk * (2.0 * static_cast<double>(p) - kk) * std::log(n);
    }
    for (std::size_t k = 0; k < p; ++k) {
        if (score[k] < best) {
            best = score[k];
            best_k = k;
        }
    }
    return best_k;
}

std::size_t mdl_rank(const ComplexMatrix& m)
{
    std::vector<double> ev;
    return mdl_rank(m, ev);
}

MdlReport estimate_model_order(const ComplexTensor& t)
{
    if (t.order() != 3)
        throw std::invalid_argument("estimate_model_order: tensor must be third order");
    MdlReport report;
    for (std::size_t mode = 0; mode < 3; ++mode) {
        std::vector<double> ev;
        report.per_mode_estimates.push_back(mdl_rank(unfold(t, mode), ev));
        report.eigenvalue_profiles.push_back(std::move(ev));
    }
    report.l_hat = *std::max_element(report.per_mode_estimates.begin(), report.per_mode_estimates.end());
    return report;
}

} // namespace tvpce
