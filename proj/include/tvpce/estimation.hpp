#pragma once

#include <cstddef>
#include <vector>

#include "tvpce/cp_als.hpp"
#include "tvpce/harmonic.hpp"
#include "tvpce/model_order.hpp"
#include "tvpce/sim_channel.hpp"

namespace tvpce {

struct EstimatorConfig {
    CpSolveConfig cp;  // rank is replaced by the detected model order
    AcdConfig acd;
    bool refine = true;          // least-squares refinement of the un-parameterized factor
    bool parallel_paths = false; // run the per-path branches concurrently
};

struct StageTimings {
    double model_order_ms = 0.0;
    double cp_ms = 0.0;
    double per_path_total_ms = 0.0;
    double total_ms = 0.0;
};

struct EstimationDiagnostics {
    MdlReport mdl;
    std::size_t detected_order = 0; // before clamping
    bool order_clamped = false;
    double cp_residual = 0.0;
    std::size_t cp_iterations = 0;
    std::vector<double> acd_objective; // per output path
};

struct EstimationResult {
    std::size_t l_hat = 0;
    ChannelParamSet params; // sorted by descending |b|
    ComplexTensor h_hat;    // channel_tensor(params, dims)
    StageTimings timings;
    EstimationDiagnostics diagnostics;
};

struct PathEstimate {
    PathParams params;
    double objective = 0.0;
};

} // namespace tvpce
