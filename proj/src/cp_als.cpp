#include "tvpce/cp_als.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>

#include "tvpce/errors.hpp"

namespace tvpce {

namespace {

constexpr double pinv_floor = 1e-12;
constexpr double exact_fit = 1e-14;

using Rng = std::mt19937_64;

ComplexMatrix random_factor(Eigen::Index rows, Eigen::Index cols, Rng& rng)
{
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    ComplexMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = cplx(g(rng), g(rng));
    return m;
}

// Leading `rank` left singular vectors of an unfolding; columns beyond the
// row count are filled randomly.
ComplexMatrix hosvd_factor(const ComplexMatrix& unfolding, Eigen::Index rank, Rng& rng)
{
    const Eigen::Index rows = unfolding.rows();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(unfolding * unfolding.adjoint());
    ComplexMatrix out = random_factor(rows, rank, rng);
    const Eigen::Index take = std::min(rank, rows);
    // Eigenvalues come in ascending order.
    for (Eigen::Index k = 0; k < take; ++k)
        out.col(k) = eig.eigenvectors().col(rows - 1 - k);
    return out;
}

// Least-squares update of the factor F in X ~ F * (P kr Q)^T, with the Gram
// pseudoinverse floored at pinv_floor * sigma_max. Returns nullopt when the
// subproblem carries no information.
std::optional<ComplexMatrix> ls_update(const ComplexMatrix& unfolding, const ComplexMatrix& p,
                                       const ComplexMatrix& q)
{
    const ComplexMatrix kr = khatri_rao(p, q);
    const ComplexMatrix mttkrp = unfolding * kr.conjugate();
    const ComplexMatrix gram =
        (p.transpose() * p.conjugate()).cwiseProduct(q.transpose() * q.conjugate());

    Eigen::JacobiSVD<ComplexMatrix> svd(gram, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    if (!(smax > 0.0) || !std::isfinite(smax))
        return std::nullopt;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > pinv_floor * smax)
            inv(i) = 1.0 / s(i);
    const ComplexMatrix pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
    ComplexMatrix f = mttkrp * pinv;
    if (!f.allFinite())
        return std::nullopt;
    return f;
}

struct Run {
    CpFactors factors;
    std::vector<double> history;
    double residual = std::numeric_limits<double>::infinity();
};

std::optional<Run> als_run(const ComplexMatrix& x0, const ComplexMatrix& x1, const ComplexMatrix& x2,
                           double norm_t, CpFactors init, const CpSolveConfig& cfg)
{
    Run run;
    run.factors = std::move(init);
    auto& f = run.factors;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        auto a = ls_update(x0, f.a3, f.a2);
        if (!a)
            return std::nullopt;
        f.a1 = std::move(*a);
        auto b = ls_update(x1, f.a3, f.a1);
        if (!b)
            return std::nullopt;
        f.a2 = std::move(*b);
        auto c = ls_update(x2, f.a2, f.a1);
        if (!c)
            return std::nullopt;
        f.a3 = std::move(*c);

        const double res = (x0 - f.a1 * khatri_rao(f.a3, f.a2).transpose()).norm() / norm_t;
        if (!std::isfinite(res))
            return std::nullopt;
        run.history.push_back(res);
        run.residual = res;
        if (res < exact_fit || std::abs(prev - res) < cfg.rel_tol * prev)
            break;
        prev = res;
    }
    return run;
}

} // namespace

CpFactors normalize_factors(const CpFactors& f)
{
    if (f.a2.cols() != f.a1.cols() || f.a3.cols() != f.a1.cols())
        throw std::invalid_argument("normalize_factors: factor ranks differ");
    CpFactors out = f;
    for (Eigen::Index k = 0; k < f.a1.cols(); ++k) {
        cplx scale{1.0, 0.0};
        for (ComplexMatrix* m : {&out.a1, &out.a3}) {
            auto col = m->col(k);
            const double n = col.norm();
            if (!(n > 0.0))
                throw DegenerateError("normalize_factors: zero column in component " +
                                      std::to_string(k));
            const cplx lead = col(0);
            const cplx phase = std::abs(lead) > 0.0 ? lead / std::abs(lead) : cplx{1.0, 0.0};
            col /= n * phase;
            col(0) = cplx(std::abs(col(0)), 0.0);
            scale *= n * phase;
        }
        out.a2.col(k) *= scale;
    }
    return out;
}

CpResult cp_als(const ComplexTensor& t, const CpSolveConfig& cfg)
{
    if (t.order() != 3)
        throw std::invalid_argument("cp_als: tensor must be third order");
    if (cfg.rank == 0 || cfg.restarts == 0)
        throw std::invalid_argument("cp_als: rank and restarts must be positive");
    const std::size_t n1 = t.dim(0), n2 = t.dim(1), n3 = t.dim(2);
    if (cfg.rank > std::min({n1 * n2, n2 * n3, n1 * n3}))
        throw std::invalid_argument("cp_als: rank exceeds the product of two extents");
    for (const auto& z : t.data())
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::domain_error("cp_als: non-finite input");
    const double norm_t = t.frobenius();
    if (!(norm_t > 0.0))
        throw DegenerateError("cp_als: zero tensor");

    const ComplexMatrix x0 = unfold(t, 0);
    const ComplexMatrix x1 = unfold(t, 1);
    const ComplexMatrix x2 = unfold(t, 2);
    const auto rank = static_cast<Eigen::Index>(cfg.rank);

    std::optional<Run> best;
    std::size_t failed = 0;
    for (std::size_t r = 0; r < cfg.restarts; ++r) {
        std::seed_seq seq{cfg.seed, static_cast<std::uint64_t>(r)};
        Rng rng(seq);
        CpFactors init;
        if (r == 0) {
            init.a1 = hosvd_factor(x0, rank, rng);
            init.a2 = hosvd_factor(x1, rank, rng);
            init.a3 = hosvd_factor(x2, rank, rng);
        } else {
            init.a1 = random_factor(static_cast<Eigen::Index>(n1), rank, rng);
            init.a2 = random_factor(static_cast<Eigen::Index>(n2), rank, rng);
            init.a3 = random_factor(static_cast<Eigen::Index>(n3), rank, rng);
        }
        auto run = als_run(x0, x1, x2, norm_t, std::move(init), cfg);
        if (!run) {
            ++failed;
            continue;
        }
        if (!best || run->residual < best->residual)
            best = std::move(run);
        if (best->residual < exact_fit)
            break;
    }
    if (!best)
        throw SolverError("cp_als: every restart failed");

    CpResult out;
    out.factors = normalize_factors(best->factors);
    out.residual = best->residual;
    out.iterations = best->history.size();
    out.fit_history = std::move(best->history);
    out.failed_restarts = failed;
    return out;
}

} // namespace tvpce
