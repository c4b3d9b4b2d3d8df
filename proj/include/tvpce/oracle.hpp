#pragma once

#include <cstddef>

#include "tvpce/sim_channel.hpp"

namespace tvpce {

// Brute-force single-path estimators used to validate the tensor pipelines.
//
// The two frequencies that enter the observation through a plain steering
// vector are found from their mode periodograms; the remaining pair, which is
// coupled through the pilot, is scanned jointly on a grid_points x grid_points
// grid of the matched filter |beta^H z|^2 / ||beta||^2. Every grid winner is
// then refined by 20 golden-section steps inside +-2 pi / grid_points.
// Intended for L = 1 observations; with more paths the result is the
// strongest matched-filter response.

inline constexpr std::size_t oracle_golden_steps = 20;

// a = y / s, n_c x n_s x n_r.
PathParams oracle_single_path(const ComplexTensor& a, const PilotDigital& pilot, std::size_t grid_points);

// y, n_c x n_s x d_r.
PathParams oracle_single_path(const ComplexTensor& y, const PilotHybrid& pilot, std::size_t grid_points);

// Maximizer of f on [center - half_width, center + half_width] after `steps`
// golden-section reductions (the midpoint of the final bracket).
template <class F>
double golden_section_max(F f, double center, double half_width, std::size_t steps)
{
    constexpr double inv_phi = 0.6180339887498949;
    double lo = center - half_width, hi = center + half_width;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (std::size_t i = 0; i < steps; ++i) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace tvpce
