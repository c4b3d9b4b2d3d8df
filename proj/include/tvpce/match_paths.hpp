#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "tvpce/sim_channel.hpp"

namespace tvpce {

struct PathMatch {
    std::vector<std::pair<std::size_t, std::size_t>> pairs; // (truth index, estimate index), by truth index
    std::vector<std::size_t> unmatched_truth;
    std::vector<std::size_t> unmatched_estimate;
    double cost = 0.0; // summed wrapped distance over the matched pairs

    // Root-mean-square wrapped error over matched pairs, 0 when nothing matched.
    double rmse_omega1 = 0.0;
    double rmse_omega2 = 0.0;
    double rmse_psi = 0.0;
    double rmse_varsigma = 0.0;
};

// Wrapped distance between two paths summed over the four frequencies.
double path_distance(const PathParams& a, const PathParams& b);

// Minimum-cost one-to-one assignment of min(L, L_hat) pairs (Hungarian method).
PathMatch match_paths(const ChannelParamSet& truth, const ChannelParamSet& estimate);

} // namespace tvpce
