#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tvpce/cp_als.hpp"
#include "tvpce/errors.hpp"

using namespace tvpce;

namespace {

// Factors whose columns have pairwise coherence below `max_coherence`.
ComplexMatrix incoherent_factor(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng, double max_coherence)
{
    for (;;) {
        ComplexMatrix m = oracle::random_matrix(rows, cols, rng);
        bool ok = true;
        for (Eigen::Index i = 0; i < cols && ok; ++i)
            for (Eigen::Index j = i + 1; j < cols && ok; ++j)
                ok = std::abs(m.col(i).dot(m.col(j))) / (m.col(i).norm() * m.col(j).norm()) < max_coherence;
        if (ok)
            return m;
    }
}

} // namespace

TEST(CpAls, ExactRankOneRecovery)
{
    std::mt19937_64 rng(1);
    const auto a = oracle::random_vector(8, rng), b = oracle::random_vector(8, rng), c = oracle::random_vector(8, rng);
    const auto t = oracle::outer(a, b, c);
    const auto r = cp_als(t, {});
    EXPECT_LE(r.residual, 1e-10);
    EXPECT_LT(oracle::relative_difference(cp_component(r.factors, 0), t), 1e-8);
}

TEST(CpAls, ExactRankTwoRecovery)
{
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = incoherent_factor(8, 2, rng, 0.7), b = incoherent_factor(8, 2, rng, 0.7),
                   c = incoherent_factor(8, 2, rng, 0.7);
        const auto t = oracle::cp_sum(a, b, c);
        CpSolveConfig cfg;
        cfg.rank = 2;
        cfg.seed = static_cast<std::uint64_t>(trial);
        const auto r = cp_als(t, cfg);
        EXPECT_LE(r.residual, 1e-8) << "trial " << trial;
        EXPECT_LT(oracle::relative_difference(cp_compose(r.factors), t), 1e-8);
    }
}

TEST(CpAls, WhiteNoiseFitIsBoundedByTruncatedSvd)
{
    // A rank-1 CP term restricted to any unfolding is a rank-1 matrix, so no
    // CP fit can beat the best rank-1 approximation of an unfolding.
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto t = oracle::random_tensor({4, 4, 4}, rng);
        const auto r = cp_als(t, {});
        EXPECT_LT(r.residual, 1.0);
        for (std::size_t mode = 0; mode < 3; ++mode) {
            Eigen::JacobiSVD<ComplexMatrix> svd(oracle::unfold(t, mode));
            const auto& s = svd.singularValues();
            const double bound = std::sqrt(1.0 - s(0) * s(0) / s.squaredNorm());
            EXPECT_GE(r.residual, bound - 1e-12) << "mode " << mode;
        }
    }
}

TEST(CpAls, FitHistoryIsMonotone)
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        auto t = oracle::random_tensor({5, 6, 4}, rng);
        CpSolveConfig cfg;
        cfg.rank = 1 + static_cast<std::size_t>(trial % 3);
        cfg.restarts = 1;
        cfg.seed = static_cast<std::uint64_t>(trial);
        const auto r = cp_als(t, cfg);
        for (std::size_t i = 1; i < r.fit_history.size(); ++i)
            EXPECT_LE(r.fit_history[i], r.fit_history[i - 1] * (1.0 + 1e-12) + 1e-15)
                << "trial " << trial << " iteration " << i;
    }
}

TEST(CpAls, ResidualMatchesReconstruction)
{
    std::mt19937_64 rng(5);
    const auto t = oracle::random_tensor({4, 5, 3}, rng);
    CpSolveConfig cfg;
    cfg.rank = 2;
    const auto r = cp_als(t, cfg);
    EXPECT_NEAR(r.residual, (t - cp_compose(r.factors)).frobenius() / t.frobenius(), 1e-12);
    EXPECT_EQ(r.iterations, r.fit_history.size());
}

TEST(CpAls, DeterministicForSeed)
{
    std::mt19937_64 rng(6);
    const auto t = oracle::random_tensor({4, 4, 4}, rng);
    CpSolveConfig cfg;
    cfg.rank = 2;
    cfg.seed = 42;
    const auto a = cp_als(t, cfg), b = cp_als(t, cfg);
    EXPECT_EQ(a.factors.a1, b.factors.a1);
    EXPECT_EQ(a.factors.a2, b.factors.a2);
    EXPECT_EQ(a.factors.a3, b.factors.a3);
    EXPECT_EQ(a.fit_history, b.fit_history);
}

TEST(CpAls, Preconditions)
{
    std::mt19937_64 rng(7);
    const auto t = oracle::random_tensor({2, 3, 2}, rng);
    CpSolveConfig cfg;
    cfg.rank = 0;
    EXPECT_THROW(cp_als(t, cfg), std::invalid_argument);
    cfg.rank = 5; // min(2*3, 3*2, 2*2) = 4
    EXPECT_THROW(cp_als(t, cfg), std::invalid_argument);
    EXPECT_THROW(cp_als(oracle::random_tensor({2, 3}, rng), {}), std::invalid_argument);
    auto bad = t;
    bad(0, 0, 0) = cplx(std::nan(""), 0.0);
    EXPECT_THROW(cp_als(bad, {}), std::domain_error);
    EXPECT_THROW(cp_als(ComplexTensor({2, 2, 2}), {}), DegenerateError);
}

TEST(NormalizeFactors, AlreadyNormalizedIsIdentity)
{
    std::mt19937_64 rng(8);
    CpFactors f{oracle::random_matrix(4, 2, rng), oracle::random_matrix(3, 2, rng), oracle::random_matrix(5, 2, rng)};
    const auto once = normalize_factors(f);
    const auto twice = normalize_factors(once);
    EXPECT_LT((once.a1 - twice.a1).norm(), 1e-14);
    EXPECT_LT((once.a2 - twice.a2).norm(), 1e-14 * once.a2.norm());
    EXPECT_LT((once.a3 - twice.a3).norm(), 1e-14);
}

TEST(NormalizeFactors, ScaleMovesIntoMiddleFactor)
{
    std::mt19937_64 rng(9);
    CpFactors f{oracle::random_matrix(4, 1, rng), oracle::random_matrix(3, 1, rng), oracle::random_matrix(5, 1, rng)};
    CpFactors scaled = f;
    const cplx s = std::polar(2.0, 0.25 * std::acos(-1.0));
    scaled.a1.col(0) *= s;
    const auto n = normalize_factors(f), ns = normalize_factors(scaled);
    EXPECT_LT(oracle::relative_difference(cp_compose(ns), cp_compose(scaled)), 1e-14);
    EXPECT_LT((ns.a1 - n.a1).norm(), 1e-14);
    EXPECT_LT((ns.a2 - s * n.a2).norm(), 1e-13 * ns.a2.norm());
}

TEST(NormalizeFactors, Invariants)
{
    std::mt19937_64 rng(10);
    CpFactors f{oracle::random_matrix(4, 3, rng), oracle::random_matrix(3, 3, rng), oracle::random_matrix(5, 3, rng)};
    const auto n = normalize_factors(f);
    EXPECT_LT(oracle::relative_difference(cp_compose(n), cp_compose(f)), 1e-14);
    for (Eigen::Index k = 0; k < 3; ++k) {
        EXPECT_NEAR(n.a1.col(k).norm(), 1.0, 1e-14);
        EXPECT_NEAR(n.a3.col(k).norm(), 1.0, 1e-14);
        EXPECT_EQ(n.a1(0, k).imag(), 0.0);
        EXPECT_GE(n.a1(0, k).real(), 0.0);
        EXPECT_EQ(n.a3(0, k).imag(), 0.0);
        // The product of column norms is preserved per component.
        const double before = f.a1.col(k).norm() * f.a2.col(k).norm() * f.a3.col(k).norm();
        EXPECT_NEAR(n.a2.col(k).norm(), before, 1e-13 * before);
    }
    CpFactors zero = f;
    zero.a3.col(1).setZero();
    EXPECT_THROW(normalize_factors(zero), DegenerateError);
}
