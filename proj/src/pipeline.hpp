#pragma once

#include <algorithm>
#include <chrono>
#include <future>
#include <string>
#include <vector>

#include "tvpce/errors.hpp"
#include "tvpce/estimation.hpp"

namespace tvpce::detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point since)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

// Model order -> CP -> independent per-component branches -> reconstruction.
// `branch(factors, k)` returns the PathEstimate of component k.
template <class Branch>
EstimationResult run_pipeline(const ComplexTensor& obs, const SystemDims& dims, const EstimatorConfig& cfg,
                              Branch branch)
{
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    EstimationResult out;

    auto t0 = clock::now();
    out.diagnostics.mdl = estimate_model_order(obs);
    out.timings.model_order_ms = elapsed_ms(t0);

    std::size_t order = out.diagnostics.mdl.l_hat;
    out.diagnostics.detected_order = order;
    const std::size_t n1 = obs.dim(0), n2 = obs.dim(1), n3 = obs.dim(2);
    const std::size_t bound = std::min({n1 * n2, n2 * n3, n1 * n3});
    if (order > bound) {
        order = bound;
        out.diagnostics.order_clamped = true;
    }

    std::vector<PathEstimate> paths;
    if (order > 0) {
        t0 = clock::now();
        CpSolveConfig cp = cfg.cp;
        cp.rank = order;
        const CpResult cpr = cp_als(obs, cp);
        out.timings.cp_ms = elapsed_ms(t0);
        out.diagnostics.cp_residual = cpr.residual;
        out.diagnostics.cp_iterations = cpr.iterations;

        t0 = clock::now();
        auto run_branch = [&](std::size_t k) {
            try {
                return branch(cpr.factors, k);
            } catch (const DegenerateError& e) {
                throw DegenerateError("path " + std::to_string(k) + ": " + e.what());
            }
        };
        paths.resize(order);
        if (cfg.parallel_paths && order > 1) {
            std::vector<std::future<PathEstimate>> jobs;
            for (std::size_t k = 0; k < order; ++k)
                jobs.push_back(std::async(std::launch::async, run_branch, k));
            for (std::size_t k = 0; k < order; ++k)
                paths[k] = jobs[k].get();
        } else {
            for (std::size_t k = 0; k < order; ++k)
                paths[k] = run_branch(k);
        }
        out.timings.per_path_total_ms = elapsed_ms(t0);
    }

    std::stable_sort(paths.begin(), paths.end(), [](const PathEstimate& x, const PathEstimate& y) {
        return std::abs(x.params.b) > std::abs(y.params.b);
    });
    for (const auto& p : paths) {
        out.params.paths.push_back(p.params);
        out.diagnostics.acd_objective.push_back(p.objective);
    }
    out.l_hat = out.params.l();
    out.h_hat = channel_tensor(out.params, dims);
    out.timings.total_ms = elapsed_ms(start);
    return out;
}

} // namespace tvpce::detail
