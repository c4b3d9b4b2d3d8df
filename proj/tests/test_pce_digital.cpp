#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "tvpce/angles.hpp"
#include "tvpce/errors.hpp"
#include "tvpce/pce_digital.hpp"

using namespace tvpce;

namespace {

SystemDims cube_dims()
{
    SystemDims d;
    d.n_c = 16;
    d.n_s = 16;
    d.n_r = 16;
    d.n_t = 4;
    return d;
}

struct Case {
    ChannelParamSet truth;
    ComplexTensor h;
    PilotDigital pilot;
    DigitalReception rx;
};

Case make_case(const SystemDims& d, std::size_t l, std::uint64_t seed, double snr_db)
{
    ChannelGenConfig cg;
    cg.l = l;
    cg.seed = seed;
    cg.min_separation = 0.5;
    Case c;
    c.truth = draw_channel(cg);
    c.h = channel_tensor(c.truth, d);
    c.pilot = make_pilot_digital(d, seed + 100);
    c.rx = receive_digital(c.h, c.pilot, snr_to_n0(c.h, c.pilot, snr_db), seed + 200);
    return c;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

constexpr double noiseless = std::numeric_limits<double>::infinity();

} // namespace

TEST(RefineA2, ExactOnConsistentComponent)
{
    std::mt19937_64 rng(1);
    const auto a1 = vandermonde(0.4, 6), a3 = vandermonde(-1.9, 5);
    const auto a2 = oracle::random_vector(7, rng);
    const auto got = refine_a2(oracle::outer(a1, a2, a3), a1, a3);
    EXPECT_LT((got - a2).norm(), 1e-14 * a2.norm());
}

TEST(RefineA2, PicksTheMatchingComponent)
{
    // Two orthogonal Vandermonde pairs: projecting onto one removes the other.
    std::mt19937_64 rng(2);
    const std::size_t n = 8;
    const auto e0 = vandermonde(0.0, n), e1 = vandermonde(2.0 * pi / n, n);
    const auto x = oracle::random_vector(5, rng), z = oracle::random_vector(5, rng);
    auto mix = oracle::outer(e0, x, e0);
    mix += oracle::outer(e1, z, e1);
    EXPECT_LT((refine_a2(mix, e0, e0) - x).norm(), 1e-13 * x.norm());
    EXPECT_LT((refine_a2(mix, e1, e1) - z).norm(), 1e-13 * z.norm());
}

TEST(RefineA2, MatchesPseudoInverseOracle)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const auto y = oracle::random_tensor({6, 7, 5}, rng);
        const auto a1 = oracle::random_vector(6, rng), a3 = oracle::random_vector(5, rng);
        // y_(1) ~ a2 (a3 kron a1)^T, least squares over a2.
        const ComplexMatrix k = oracle::kron(a3, a1);
        const ComplexMatrix expect = (oracle::pinv(k) * oracle::unfold(y, 1).transpose()).transpose();
        const auto got = refine_a2(y, a1, a3);
        EXPECT_LT((got - expect.col(0)).norm(), 1e-10 * got.norm());
    }
}

TEST(RefineA2, RejectsBadInput)
{
    ComplexTensor y({3, 4, 2});
    EXPECT_THROW(refine_a2(y, ComplexVector::Ones(2), ComplexVector::Ones(2)), std::invalid_argument);
    EXPECT_THROW(refine_a2(y, ComplexVector::Zero(3), ComplexVector::Ones(2)), DegenerateError);
}

TEST(EstimateDigital, SinglePathNoiseless)
{
    const auto d = cube_dims();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto c = make_case(d, 1, seed, noiseless);
        const auto r = estimate_digital(c.rx.a, c.pilot, EstimatorConfig{});
        ASSERT_EQ(r.l_hat, 1u);
        const auto& p = r.params.paths[0];
        const auto& q = c.truth.paths[0];
        EXPECT_LT(angular_distance(p.omega1, q.omega1), 1e-6);
        EXPECT_LT(angular_distance(p.omega2, q.omega2), 1e-6);
        EXPECT_LT(angular_distance(p.psi, q.psi), 1e-6);
        EXPECT_LT(angular_distance(p.varsigma, q.varsigma), 1e-6);
        EXPECT_LT(std::abs(p.b - q.b), 1e-6 * std::abs(q.b));
        EXPECT_LE(relative_error(c.h, r.h_hat), 1e-8);
    }
}

TEST(EstimateDigital, ThreePathsNoiseless)
{
    const auto d = cube_dims();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto c = make_case(d, 3, seed, noiseless);
        const auto r = estimate_digital(c.rx.a, c.pilot, EstimatorConfig{});
        EXPECT_EQ(r.l_hat, 3u);
        EXPECT_LE(relative_error(c.h, r.h_hat), 1e-4) << seed;
        for (std::size_t i = 1; i < r.params.l(); ++i)
            EXPECT_GE(std::abs(r.params.paths[i - 1].b), std::abs(r.params.paths[i].b));
        EXPECT_EQ(r.diagnostics.acd_objective.size(), r.l_hat);
    }
}

TEST(EstimateDigital, ZeroObservationGivesEmptyEstimate)
{
    const auto d = cube_dims();
    const auto pilot = make_pilot_digital(d, 0);
    const auto r = estimate_digital(ComplexTensor({16, 16, 16}), pilot, EstimatorConfig{});
    EXPECT_EQ(r.l_hat, 0u);
    EXPECT_TRUE(r.params.paths.empty());
    EXPECT_EQ(r.h_hat.dims(), (std::vector<std::size_t>{16, 16, 16, 4}));
    EXPECT_EQ(r.h_hat.frobenius(), 0.0);
}

TEST(EstimateDigital, UnrefinedIsExactWithoutNoiseAndWorseWithIt)
{
    const auto d = cube_dims();
    EstimatorConfig raw;
    raw.refine = false;
    const auto c = make_case(d, 1, 11, noiseless);
    EXPECT_LE(relative_error(c.h, estimate_digital(c.rx.a, c.pilot, raw).h_hat), 1e-8);

    std::vector<double> refined, unrefined;
    for (std::uint64_t seed = 0; seed < 9; ++seed) {
        const auto n = make_case(d, 1, seed, 0.0);
        refined.push_back(relative_error(n.h, estimate_digital(n.rx.a, n.pilot, EstimatorConfig{}).h_hat));
        unrefined.push_back(relative_error(n.h, estimate_digital(n.rx.a, n.pilot, raw).h_hat));
    }
    EXPECT_LT(median(refined), median(unrefined));
}

TEST(EstimateDigital, ParallelBranchesMatchSerial)
{
    const auto c = make_case(cube_dims(), 3, 4, 20.0);
    EstimatorConfig par;
    par.parallel_paths = true;
    const auto a = estimate_digital(c.rx.a, c.pilot, EstimatorConfig{});
    const auto b = estimate_digital(c.rx.a, c.pilot, par);
    EXPECT_EQ(a.params, b.params);
    EXPECT_EQ(a.h_hat, b.h_hat);
}

TEST(EstimateDigital, TimingsAreConsistent)
{
    const auto c = make_case(cube_dims(), 2, 6, 30.0);
    const auto r = estimate_digital(c.rx.a, c.pilot, EstimatorConfig{});
    EXPECT_GE(r.timings.model_order_ms, 0.0);
    EXPECT_GT(r.timings.cp_ms, 0.0);
    EXPECT_GT(r.timings.per_path_total_ms, 0.0);
    EXPECT_GE(r.timings.total_ms, r.timings.model_order_ms + r.timings.cp_ms + r.timings.per_path_total_ms);
}

TEST(EstimateDigital, RejectsShapeMismatch)
{
    const auto d = cube_dims();
    const auto pilot = make_pilot_digital(d, 0);
    EXPECT_THROW(estimate_digital(ComplexTensor({16, 8, 16}), pilot, EstimatorConfig{}), std::invalid_argument);
    EXPECT_THROW(estimate_digital(ComplexTensor({16, 16}), pilot, EstimatorConfig{}), std::invalid_argument);
}
