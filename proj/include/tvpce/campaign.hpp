#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tvpce/estimation.hpp"

namespace tvpce {

enum class Architecture { digital, hybrid };

const char* to_string(Architecture a);
Architecture parse_architecture(const std::string& s); // throws ConfigError

struct CampaignConfig {
    SystemDims system{};
    Architecture mode = Architecture::hybrid;
    ChannelGenConfig channel{}; // seed is replaced per run
    std::vector<double> snr_db_list{0.0, 10.0, 20.0, 30.0};
    std::size_t mc_runs = 128;
    EstimatorConfig estimator{};
    std::optional<std::uint64_t> pilot_seed; // fixed pilot for every run; per-run pilots when unset
    std::uint64_t base_seed = 0;
    std::size_t workers = 1;
    std::string output_path = "campaign.csv";

    void validate() const; // throws ConfigError
};

// One Monte Carlo realization. The channel depends only on (base seed, run),
// so every SNR sees the same channel; the noise also depends on the SNR index.
struct Scenario {
    ChannelParamSet truth;
    ComplexTensor h;
    std::variant<PilotDigital, PilotHybrid> pilot;
    ComplexTensor observation; // y / s for digital, y for hybrid
    double n0 = 0.0;
    std::uint64_t channel_seed = 0;
    std::uint64_t pilot_seed = 0;
    std::uint64_t noise_seed = 0;
};

Scenario make_scenario(const CampaignConfig& cfg, std::size_t run_id, std::size_t snr_index);

EstimationResult estimate_scenario(const Scenario& s, const EstimatorConfig& cfg);

struct RunRecord {
    std::size_t run_id = 0;
    double snr_db = 0.0;
    std::size_t l_true = 0;
    std::size_t l_hat = 0;
    double rel_err = 0.0;
    double time_total_ms = 0.0;
    double time_cp_ms = 0.0;
    double time_mdl_ms = 0.0;
    double time_paths_ms = 0.0;
    std::uint64_t seed = 0; // channel seed
    std::string error;      // empty on success; rel_err is 1.0 otherwise
};

inline constexpr double failed_run_rel_err = 1.0;

RunRecord run_single(const CampaignConfig& cfg, std::size_t run_id, std::size_t snr_index);

struct SnrSummary {
    double snr_db = 0.0;
    std::size_t runs = 0;
    std::size_t failures = 0;
    double mean_rel_err = 0.0;
    double median_rel_err = 0.0;
    std::map<std::size_t, std::size_t> l_hat_histogram;
    double cp_time_share = 0.0; // sum time_cp / sum time_total
};

struct CampaignResult {
    std::vector<RunRecord> records; // sorted by (snr_db, run_id)
    std::vector<SnrSummary> summary; // in ascending SNR order
};

// Runs every (SNR, run) job, on cfg.workers threads when more than one.
// Estimator failures are recorded per run and never abort the campaign.
CampaignResult run_campaign(const CampaignConfig& cfg);

std::vector<SnrSummary> summarize(const std::vector<RunRecord>& records);

double median(std::vector<double> v);

// Header plus one line per record, fields in RunRecord order.
void write_csv(std::ostream& os, const std::vector<RunRecord>& records);
void save_csv(const std::string& path, const std::vector<RunRecord>& records); // IoError on failure
std::vector<RunRecord> read_csv(std::istream& is);                            // IoError on malformed input

void write_summary(std::ostream& os, const std::vector<SnrSummary>& summary);

// Warning text when the CP stage takes at most half of the run time.
std::optional<std::string> cp_share_warning(const std::vector<SnrSummary>& summary);

} // namespace tvpce
