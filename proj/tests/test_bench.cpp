#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "tvpce/angles.hpp"
#include "tvpce/campaign.hpp"
#include "tvpce/campaign_config.hpp"
#include "tvpce/errors.hpp"
#include "tvpce/match_paths.hpp"
#include "tvpce/oracle.hpp"
#include "tvpce/pce_digital.hpp"

using namespace tvpce;

namespace {

PathParams random_path(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-pi, pi);
    return {cplx{1.0, 0.0}, u(rng), u(rng), u(rng), u(rng)};
}

ChannelParamSet random_set(std::size_t l, std::mt19937_64& rng)
{
    ChannelParamSet s;
    for (std::size_t i = 0; i < l; ++i)
        s.paths.push_back(random_path(rng));
    return s;
}

// Cheapest injective assignment by enumerating permutations of the larger set.
double brute_force_cost(const ChannelParamSet& truth, const ChannelParamSet& est)
{
    const bool swap = truth.l() > est.l();
    const auto& small = swap ? est : truth;
    const auto& large = swap ? truth : est;
    std::vector<std::size_t> perm(large.l());
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double c = 0.0;
        for (std::size_t i = 0; i < small.l(); ++i)
            c += path_distance(small.paths[i], large.paths[perm[i]]);
        best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

CampaignConfig small_campaign()
{
    CampaignConfig cfg;
    cfg.mode = Architecture::digital;
    cfg.system.n_c = 8;
    cfg.system.n_s = 8;
    cfg.system.n_r = 6;
    cfg.system.n_t = 4;
    cfg.channel.l = 2;
    cfg.channel.min_separation = 0.5;
    cfg.snr_db_list = {10.0, 30.0};
    cfg.mc_runs = 2;
    cfg.base_seed = 40;
    return cfg;
}

std::string csv_of(const std::vector<RunRecord>& records)
{
    std::ostringstream os;
    write_csv(os, records);
    return os.str();
}

void strip_timings(std::vector<RunRecord>& records)
{
    for (auto& r : records)
        r.time_total_ms = r.time_cp_ms = r.time_mdl_ms = r.time_paths_ms = 0.0;
}

} // namespace

TEST(MatchPaths, AgreesWithPermutationSearch)
{
    std::mt19937_64 rng(1);
    for (std::size_t l = 1; l <= 6; ++l)
        for (std::size_t l_hat : {l, l > 1 ? l - 1 : l, l + 1}) {
            const auto truth = random_set(l, rng), est = random_set(l_hat, rng);
            const auto m = match_paths(truth, est);
            EXPECT_NEAR(m.cost, brute_force_cost(truth, est), 1e-12) << l << " " << l_hat;
            EXPECT_EQ(m.pairs.size(), std::min(l, l_hat));
            EXPECT_EQ(m.unmatched_truth.size() + m.pairs.size(), l);
            EXPECT_EQ(m.unmatched_estimate.size() + m.pairs.size(), l_hat);
        }
}

TEST(MatchPaths, PermutedCopyMatchesExactly)
{
    std::mt19937_64 rng(2);
    const auto truth = random_set(5, rng);
    auto est = truth;
    std::vector<std::size_t> order{3, 0, 4, 1, 2};
    for (std::size_t i = 0; i < 5; ++i)
        est.paths[i] = truth.paths[order[i]];
    const auto m = match_paths(truth, est);
    EXPECT_EQ(m.cost, 0.0);
    for (const auto& [t, e] : m.pairs)
        EXPECT_EQ(order[e], t);
    EXPECT_EQ(m.rmse_omega1, 0.0);
    EXPECT_EQ(m.rmse_varsigma, 0.0);
}

TEST(MatchPaths, DistanceWrapsAroundPi)
{
    const PathParams a{cplx{1.0, 0.0}, pi - 0.01, 0.0, 0.0, 0.0};
    const PathParams b{cplx{1.0, 0.0}, -pi + 0.01, 0.0, 0.0, 0.0};
    EXPECT_NEAR(path_distance(a, b), 0.02, 1e-12);
    const auto m = match_paths(ChannelParamSet{{a}}, ChannelParamSet{{b}});
    EXPECT_NEAR(m.rmse_omega1, 0.02, 1e-12);
    EXPECT_EQ(m.rmse_psi, 0.0);
}

TEST(MatchPaths, EmptySets)
{
    std::mt19937_64 rng(3);
    const auto truth = random_set(3, rng);
    const auto m = match_paths(truth, ChannelParamSet{});
    EXPECT_TRUE(m.pairs.empty());
    EXPECT_EQ(m.unmatched_truth.size(), 3u);
    EXPECT_EQ(m.cost, 0.0);
    EXPECT_EQ(m.rmse_omega2, 0.0);
}

TEST(Oracle, GoldenSectionFindsParabolaPeak)
{
    const auto f = [](double x) { return -(x - 0.123) * (x - 0.123); };
    EXPECT_NEAR(golden_section_max(f, 0.1, 0.05, 40), 0.123, 1e-9);
    // Bracket after n steps is 2 h 0.618^n wide; the midpoint is within half of it.
    const double got = golden_section_max(f, 0.1, 0.05, 20);
    EXPECT_LE(std::abs(got - 0.123), 0.05 * std::pow(0.6180339887498949, 20));
}

TEST(Oracle, RecoversGridAlignedPathDigital)
{
    SystemDims d;
    d.n_c = 16;
    d.n_s = 16;
    d.n_r = 8;
    d.n_t = 4;
    const std::size_t g = 64;
    const PathParams q{cplx{0.5, -0.2}, grid_angle(5, g), grid_angle(60, g), grid_angle(17, g), grid_angle(40, g)};
    const auto h = channel_tensor(ChannelParamSet{{q}}, d);
    const auto pilot = make_pilot_digital(d, 3);
    const auto got = oracle_single_path(receive_digital(h, pilot, 0.0, 0).a, pilot, g);
    EXPECT_LT(angular_distance(got.omega1, q.omega1), 1e-5);
    EXPECT_LT(angular_distance(got.omega2, q.omega2), 1e-5);
    EXPECT_LT(angular_distance(got.psi, q.psi), 1e-5);
    EXPECT_LT(angular_distance(got.varsigma, q.varsigma), 1e-5);
    EXPECT_LT(std::abs(got.b - q.b), 1e-4 * std::abs(q.b));
}

TEST(Oracle, RecoversGridAlignedPathHybrid)
{
    SystemDims d;
    d.n_c = 16;
    d.n_s = 8;
    const std::size_t g = 64;
    const PathParams q{cplx{0.0, 1.0}, grid_angle(3, g), grid_angle(50, g), grid_angle(8, g), grid_angle(22, g)};
    const auto h = channel_tensor(ChannelParamSet{{q}}, d);
    const auto pilot = make_pilot_hybrid(d, 1);
    const auto got = oracle_single_path(receive_hybrid(h, pilot, 0.0, 0), pilot, g);
    EXPECT_LT(angular_distance(got.omega1, q.omega1), 1e-5);
    EXPECT_LT(angular_distance(got.omega2, q.omega2), 1e-5);
    EXPECT_LT(angular_distance(got.psi, q.psi), 1e-5);
    EXPECT_LT(angular_distance(got.varsigma, q.varsigma), 1e-5);
}

TEST(Oracle, AgreesWithEstimatorOffGrid)
{
    SystemDims d;
    d.n_c = 16;
    d.n_s = 16;
    d.n_r = 8;
    d.n_t = 4;
    ChannelGenConfig cg;
    cg.l = 1;
    cg.seed = 12;
    const auto truth = draw_channel(cg);
    const auto h = channel_tensor(truth, d);
    const auto pilot = make_pilot_digital(d, 2);
    const auto a = receive_digital(h, pilot, 0.0, 0).a;
    const auto oracle = oracle_single_path(a, pilot, 128);
    const auto est = estimate_digital(a, pilot, EstimatorConfig{});
    ASSERT_EQ(est.l_hat, 1u);
    EXPECT_LT(path_distance(oracle, est.params.paths[0]), 1e-4);
}

TEST(Oracle, RejectsBadInput)
{
    SystemDims d;
    d.n_c = 4;
    d.n_s = 4;
    d.n_r = 4;
    d.n_t = 2;
    const auto pilot = make_pilot_digital(d, 0);
    EXPECT_THROW(oracle_single_path(ComplexTensor({4, 4, 4}), pilot, 3), std::invalid_argument);
    EXPECT_THROW(oracle_single_path(ComplexTensor({4, 5, 4}), pilot, 16), std::invalid_argument);
}

TEST(Campaign, ShapeAndDeterminism)
{
    const auto cfg = small_campaign();
    auto a = run_campaign(cfg);
    ASSERT_EQ(a.records.size(), 4u);
    EXPECT_EQ(a.records[0].snr_db, 10.0);
    EXPECT_EQ(a.records[1].run_id, 1u);
    EXPECT_EQ(a.records[2].snr_db, 30.0);
    // Both SNRs see the same channel for a given run.
    EXPECT_EQ(a.records[0].seed, a.records[2].seed);
    EXPECT_EQ(make_scenario(cfg, 1, 0).truth, make_scenario(cfg, 1, 1).truth);
    EXPECT_NE(make_scenario(cfg, 1, 0).noise_seed, make_scenario(cfg, 1, 1).noise_seed);

    auto parallel = cfg;
    parallel.workers = 3;
    auto b = run_campaign(cfg), c = run_campaign(parallel);
    strip_timings(a.records);
    strip_timings(b.records);
    strip_timings(c.records);
    EXPECT_EQ(csv_of(a.records), csv_of(b.records));
    EXPECT_EQ(csv_of(a.records), csv_of(c.records));
}

TEST(Campaign, SummaryMatchesRecords)
{
    auto cfg = small_campaign();
    cfg.mc_runs = 3;
    const auto res = run_campaign(cfg);
    ASSERT_EQ(res.summary.size(), 2u);
    for (const auto& s : res.summary) {
        std::vector<double> errs;
        double cp = 0.0, total = 0.0;
        std::size_t hist_total = 0;
        for (const auto& r : res.records)
            if (r.snr_db == s.snr_db) {
                errs.push_back(r.rel_err);
                cp += r.time_cp_ms;
                total += r.time_total_ms;
            }
        std::sort(errs.begin(), errs.end());
        EXPECT_EQ(s.runs, 3u);
        EXPECT_EQ(s.median_rel_err, errs[1]);
        EXPECT_NEAR(s.mean_rel_err, (errs[0] + errs[1] + errs[2]) / 3.0, 1e-15);
        EXPECT_NEAR(s.cp_time_share, cp / total, 1e-12);
        for (const auto& [l, n] : s.l_hat_histogram)
            hist_total += n;
        EXPECT_EQ(hist_total, 3u);
    }
    EXPECT_EQ(median({3.0, 1.0, 2.0, 10.0}), 2.5);
    EXPECT_THROW(median({}), std::invalid_argument);
}

TEST(Campaign, FailuresAreContained)
{
    auto cfg = small_campaign();
    cfg.estimator.acd.grid_oversample = 0; // every path search rejects this
    const auto res = run_campaign(cfg);
    ASSERT_EQ(res.records.size(), 4u);
    for (const auto& r : res.records) {
        EXPECT_EQ(r.rel_err, failed_run_rel_err);
        EXPECT_FALSE(r.error.empty());
    }
    EXPECT_EQ(res.summary[0].failures, 2u);
}

TEST(Campaign, NoiselessSinglePathIsExact)
{
    auto cfg = small_campaign();
    cfg.system.n_c = 16;
    cfg.system.n_s = 16;
    cfg.system.n_r = 8;
    cfg.channel.l = 1;
    cfg.snr_db_list = {std::numeric_limits<double>::infinity()};
    cfg.mc_runs = 4;
    for (const auto& r : run_campaign(cfg).records) {
        EXPECT_TRUE(r.error.empty()) << r.error;
        EXPECT_EQ(r.l_hat, 1u);
        EXPECT_LE(r.rel_err, 1e-6);
    }
}

TEST(Campaign, CpShareWarning)
{
    SnrSummary s;
    s.cp_time_share = 0.7;
    EXPECT_FALSE(cp_share_warning({s}).has_value());
    s.cp_time_share = 0.3;
    EXPECT_TRUE(cp_share_warning({s}).has_value());
}

TEST(Csv, RoundTrip)
{
    std::vector<RunRecord> records(2);
    records[0] = {0, -5.5, 3, 2, 0.1 + 0.2, 12.25, 3.0, 1.0 / 3.0, 7.0, 99, ""};
    records[1] = {1, std::numeric_limits<double>::infinity(), 3, 0, 1.0, 0.0, 0.0, 0.0, 0.0, 100,
                  "path 0: bad, \"quoted\" input"};
    const std::string text = csv_of(records);
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "run_id,snr_db,l_true,l_hat,rel_err,time_total_ms,time_cp_ms,time_mdl_ms,time_paths_ms,seed,error");
    std::istringstream is(text);
    const auto back = read_csv(is);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].rel_err, 0.1 + 0.2);
    EXPECT_EQ(back[0].time_mdl_ms, 1.0 / 3.0);
    EXPECT_EQ(back[1].snr_db, std::numeric_limits<double>::infinity());
    EXPECT_EQ(back[1].error, records[1].error);
    EXPECT_EQ(csv_of(back), text);

    std::istringstream bad("nope\n");
    EXPECT_THROW(read_csv(bad), IoError);
}

TEST(Config, Defaults)
{
    std::istringstream empty("");
    const auto cfg = parse_campaign_config(empty);
    EXPECT_EQ(cfg.mode, Architecture::hybrid);
    EXPECT_EQ(cfg.snr_db_list, (std::vector<double>{0.0, 10.0, 20.0, 30.0}));
    EXPECT_EQ(cfg.mc_runs, 128u);
    EXPECT_EQ(cfg.channel.l, 10u);
    EXPECT_EQ(cfg.system.n_c, 31u);
    EXPECT_FALSE(cfg.pilot_seed.has_value());
}

TEST(Config, ParsesValues)
{
    std::istringstream is("[system]\nmode = digital\nn_c = 12\nd = 2\n[noise]\nsnr_db = -5, 7.5, inf\n"
                          "[pilot]\nseed = 9\n[mc]\nruns = 3\nworkers = 2\n[estimator]\nrefine = false\n");
    const auto cfg = parse_campaign_config(is);
    EXPECT_EQ(cfg.mode, Architecture::digital);
    EXPECT_EQ(cfg.system.n_c, 12u);
    EXPECT_EQ(cfg.system.d_t, 2u);
    EXPECT_EQ(cfg.system.d_r, 2u);
    EXPECT_EQ(cfg.snr_db_list, (std::vector<double>{-5.0, 7.5, std::numeric_limits<double>::infinity()}));
    EXPECT_EQ(cfg.pilot_seed, std::optional<std::uint64_t>(9));
    EXPECT_EQ(cfg.mc_runs, 3u);
    EXPECT_EQ(cfg.workers, 2u);
    EXPECT_FALSE(cfg.estimator.refine);
}

TEST(Config, RejectsUnknownAndMalformed)
{
    for (const char* text : {"[system]\nbogus = 1\n", "[nowhere]\nx = 1\n", "[system]\nn_c = twelve\n",
                             "[system]\nn_c = -3\n", "[system]\nmode = analog\n", "[noise]\nsnr_db = 1,,2\n",
                             "[mc]\nruns = 0\n", "[system\n"}) {
        std::istringstream is(text);
        EXPECT_THROW(parse_campaign_config(is), ConfigError) << text;
    }
    EXPECT_THROW(load_campaign_config("/nonexistent/dir/file.ini"), IoError);
}

TEST(Config, WriteParseRoundTrip)
{
    CampaignConfig cfg = small_campaign();
    cfg.pilot_seed = 5;
    cfg.estimator.acd.starts = 3;
    cfg.estimator.cp.rel_tol = 1.5e-9;
    cfg.snr_db_list = {-2.5, std::numeric_limits<double>::infinity()};
    cfg.output_path = "out/run.csv";
    std::ostringstream os;
    write_campaign_config(os, cfg);
    std::istringstream is(os.str());
    const auto back = parse_campaign_config(is);
    std::ostringstream again;
    write_campaign_config(again, back);
    EXPECT_EQ(os.str(), again.str());
    EXPECT_EQ(back.snr_db_list, cfg.snr_db_list);
    EXPECT_EQ(back.pilot_seed, cfg.pilot_seed);
    EXPECT_EQ(back.estimator.cp.rel_tol, cfg.estimator.cp.rel_tol);
    EXPECT_EQ(back.output_path, cfg.output_path);
}
