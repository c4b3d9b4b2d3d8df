// Command-line front end: simulate, estimate, campaign, oracle.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "tvpce/campaign.hpp"
#include "tvpce/campaign_config.hpp"
#include "tvpce/errors.hpp"
#include "tvpce/match_paths.hpp"
#include "tvpce/oracle.hpp"
#include "tvpce/param_io.hpp"
#include "tvpce/pce_digital.hpp"
#include "tvpce/pce_hybrid.hpp"
#include "tvpce/tensor_io.hpp"

namespace fs = std::filesystem;
using namespace tvpce;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_io = 3;
constexpr int exit_runtime = 1;

struct Overrides {
    std::string config_path;
    std::optional<std::string> mode;
    std::optional<std::size_t> runs;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> snr;
    std::optional<std::size_t> workers;
    std::optional<std::size_t> paths;
    std::optional<std::string> csv;
};

void add_common(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("-c,--config", o.config_path, "INI configuration file (defaults when omitted)");
    cmd->add_option("--mode", o.mode, "digital or hybrid");
    cmd->add_option("--seed", o.seed, "base seed");
    cmd->add_option("--snr", o.snr, "comma-separated SNR list in dB ('inf' for noiseless)");
    cmd->add_option("-l,--paths", o.paths, "number of channel paths");
}

CampaignConfig resolve(const Overrides& o)
{
    CampaignConfig cfg = o.config_path.empty() ? CampaignConfig{} : load_campaign_config(o.config_path);
    if (o.mode)
        cfg.mode = parse_architecture(*o.mode);
    if (o.runs)
        cfg.mc_runs = *o.runs;
    if (o.seed)
        cfg.base_seed = *o.seed;
    if (o.snr)
        cfg.snr_db_list = parse_snr_list(*o.snr);
    if (o.workers)
        cfg.workers = *o.workers;
    if (o.paths)
        cfg.channel.l = *o.paths;
    if (o.csv)
        cfg.output_path = *o.csv;
    cfg.validate();
    return cfg;
}

void print_params(const char* title, const ChannelParamSet& p)
{
    std::cout << "# " << title << " (" << p.l() << " paths)\n";
    write_params(std::cout, p);
}

int cmd_simulate(const Overrides& o, std::size_t run, std::size_t snr_index, const fs::path& dir)
{
    const CampaignConfig cfg = resolve(o);
    const Scenario s = make_scenario(cfg, run, snr_index);
    fs::create_directories(dir);
    save_cpt(dir / "channel.cpt", s.h);
    save_cpt(dir / "observation.cpt", s.observation);
    save_params(dir / "params.txt", s.truth);
    if (const auto* p = std::get_if<PilotDigital>(&s.pilot)) {
        save_cpt(dir / "pilot_p.cpt", as_tensor(p->p));
        save_cpt(dir / "pilot_s.cpt", as_tensor(p->s));
    } else {
        const auto& h = std::get<PilotHybrid>(s.pilot);
        save_cpt(dir / "pilot_p.cpt", as_tensor(h.p));
        save_cpt(dir / "pilot_s.cpt", as_tensor(h.s));
        save_cpt(dir / "pilot_r.cpt", as_tensor(h.r));
    }
    std::cout << "wrote " << to_string(cfg.mode) << " scenario to " << dir.string() << " (channel seed "
              << s.channel_seed << ", snr " << cfg.snr_db_list[snr_index] << " dB, n0 " << s.n0 << ")\n";
    return exit_ok;
}

struct LoadedScene {
    Architecture mode;
    ComplexTensor observation;
    std::variant<PilotDigital, PilotHybrid> pilot;
};

LoadedScene load_scene(const fs::path& dir)
{
    LoadedScene out;
    out.observation = load_cpt(dir / "observation.cpt");
    const ComplexMatrix p = as_matrix(load_cpt(dir / "pilot_p.cpt"));
    const ComplexMatrix s = as_matrix(load_cpt(dir / "pilot_s.cpt"));
    if (fs::exists(dir / "pilot_r.cpt")) {
        out.mode = Architecture::hybrid;
        out.pilot = PilotHybrid{p, s, as_matrix(load_cpt(dir / "pilot_r.cpt"))};
    } else {
        out.mode = Architecture::digital;
        out.pilot = PilotDigital{p, s};
    }
    return out;
}

int cmd_estimate(const fs::path& dir, const std::string& config_path, bool no_refine, const std::string& out_path)
{
    EstimatorConfig ecfg = config_path.empty() ? EstimatorConfig{} : load_campaign_config(config_path).estimator;
    if (no_refine)
        ecfg.refine = false;
    const LoadedScene scene = load_scene(dir);
    Scenario s;
    s.observation = scene.observation;
    s.pilot = scene.pilot;
    const EstimationResult r = estimate_scenario(s, ecfg);

    std::cout << to_string(scene.mode) << ": l_hat " << r.l_hat << " (per mode";
    for (auto e : r.diagnostics.mdl.per_mode_estimates)
        std::cout << ' ' << e;
    std::cout << ")" << (r.diagnostics.order_clamped ? " clamped" : "") << ", cp residual "
              << r.diagnostics.cp_residual << ", " << r.diagnostics.cp_iterations << " iterations\n";
    std::cout << "timing ms: total " << r.timings.total_ms << ", mdl " << r.timings.model_order_ms << ", cp "
              << r.timings.cp_ms << ", paths " << r.timings.per_path_total_ms << '\n';
    print_params("estimate", r.params);

    if (fs::exists(dir / "channel.cpt")) {
        const ComplexTensor h = load_cpt(dir / "channel.cpt");
        std::cout << "relative channel error " << relative_error(h, r.h_hat) << '\n';
    }
    if (fs::exists(dir / "params.txt")) {
        const PathMatch m = match_paths(load_params(dir / "params.txt"), r.params);
        std::cout << "rmse rad: omega1 " << m.rmse_omega1 << ", omega2 " << m.rmse_omega2 << ", psi " << m.rmse_psi
                  << ", varsigma " << m.rmse_varsigma << " (" << m.pairs.size() << " matched, "
                  << m.unmatched_truth.size() << " missed, " << m.unmatched_estimate.size() << " spurious)\n";
    }
    const fs::path out = out_path.empty() ? dir / "estimate.txt" : fs::path(out_path);
    save_params(out, r.params);
    return exit_ok;
}

int cmd_oracle(const fs::path& dir, std::size_t grid)
{
    const LoadedScene scene = load_scene(dir);
    ChannelParamSet est;
    if (const auto* p = std::get_if<PilotDigital>(&scene.pilot))
        est.paths.push_back(oracle_single_path(scene.observation, *p, grid));
    else
        est.paths.push_back(oracle_single_path(scene.observation, std::get<PilotHybrid>(scene.pilot), grid));
    print_params("oracle", est);
    if (fs::exists(dir / "params.txt")) {
        const PathMatch m = match_paths(load_params(dir / "params.txt"), est);
        std::cout << "wrapped distance to the strongest matching true path: " << m.cost << '\n';
    }
    return exit_ok;
}

int cmd_campaign(const Overrides& o, bool no_refine, bool quiet)
{
    CampaignConfig cfg = resolve(o);
    if (no_refine)
        cfg.estimator.refine = false;
    const CampaignResult r = run_campaign(cfg);
    save_csv(cfg.output_path, r.records);
    if (!quiet)
        write_summary(std::cout, r.summary);
    if (const auto w = cp_share_warning(r.summary))
        std::cerr << "warning: " << *w << '\n';
    std::cout << "wrote " << r.records.size() << " records to " << cfg.output_path << '\n';
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Time-varying MIMO-OFDM channel estimation by CP decomposition"};
    app.require_subcommand(1);

    Overrides sim_o, camp_o;
    std::size_t sim_run = 0, sim_snr_index = 0;
    std::string sim_dir = "scenario";
    auto* sim = app.add_subcommand("simulate", "draw one channel and write its tensors, pilots and parameters");
    add_common(sim, sim_o);
    sim->add_option("--run", sim_run, "run index within the campaign");
    sim->add_option("--snr-index", sim_snr_index, "index into the SNR list");
    sim->add_option("-o,--out", sim_dir, "output directory");

    std::string est_dir = "scenario", est_config, est_out;
    bool est_no_refine = false;
    auto* est = app.add_subcommand("estimate", "estimate the channel from a simulated scenario directory");
    est->add_option("-d,--dir", est_dir, "scenario directory");
    est->add_option("-c,--config", est_config, "configuration file (only [estimator] is used)");
    est->add_option("-o,--out", est_out, "parameter output file (default <dir>/estimate.txt)");
    est->add_flag("--no-refine", est_no_refine, "skip the least-squares factor refinement");

    bool camp_no_refine = false, camp_quiet = false;
    auto* camp = app.add_subcommand("campaign", "Monte Carlo campaign written as CSV");
    add_common(camp, camp_o);
    camp->add_option("-n,--runs", camp_o.runs, "Monte Carlo runs per SNR");
    camp->add_option("-j,--workers", camp_o.workers, "worker threads");
    camp->add_option("-o,--out", camp_o.csv, "CSV output path");
    camp->add_flag("--no-refine", camp_no_refine, "skip the least-squares factor refinement");
    camp->add_flag("-q,--quiet", camp_quiet, "do not print the per-SNR summary");

    std::string orc_dir = "scenario";
    std::size_t orc_grid = 256;
    auto* orc = app.add_subcommand("oracle", "exhaustive single-path search on a scenario directory");
    orc->add_option("-d,--dir", orc_dir, "scenario directory");
    orc->add_option("-g,--grid", orc_grid, "grid points per dimension")->check(CLI::Range(4, 1 << 16));

    Overrides cfg_o;
    auto* show = app.add_subcommand("config", "print the effective configuration");
    show->add_option("-c,--config", cfg_o.config_path, "INI configuration file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (*sim)
            return cmd_simulate(sim_o, sim_run, sim_snr_index, sim_dir);
        if (*est)
            return cmd_estimate(est_dir, est_config, est_no_refine, est_out);
        if (*camp)
            return cmd_campaign(camp_o, camp_no_refine, camp_quiet);
        if (*orc)
            return cmd_oracle(orc_dir, orc_grid);
        if (*show) {
            write_campaign_config(std::cout, resolve(cfg_o));
            return exit_ok;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::out_of_range& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return exit_ok;
}
