#pragma once

#include <iosfwd>
#include <string>

#include "tvpce/campaign.hpp"

namespace tvpce {

// INI-style configuration:
//
//   [system]    mode, n_c, n_s, n_r, n_t, d (sets d_t and d_r), d_t, d_r, n_a_t, n_a_r
//   [channel]   l, rician_noncentrality, rician_scale, los_boost_db, min_separation
//   [pilot]     seed (one pilot for every run; per-run pilots when absent)
//   [noise]     snr_db (comma-separated list, "inf" for noiseless)
//   [estimator] cp_max_iters, cp_rel_tol, cp_restarts, acd_max_sweeps, acd_rel_tol,
//               acd_starts, acd_grid_oversample, refine, parallel_paths
//   [mc]        runs, seed, workers
//   [output]    csv
//
// Missing keys keep their defaults. Unknown sections or keys, bad values and
// syntax errors raise ConfigError; an unreadable file raises IoError.
CampaignConfig parse_campaign_config(std::istream& is);
CampaignConfig load_campaign_config(const std::string& path);

// A complete configuration file for `cfg`, loadable by parse_campaign_config.
void write_campaign_config(std::ostream& os, const CampaignConfig& cfg);

std::vector<double> parse_snr_list(const std::string& s); // throws ConfigError

} // namespace tvpce
