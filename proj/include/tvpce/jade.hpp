#pragma once

#include "tvpce/harmonic.hpp"

namespace tvpce {

// Joint shift/angle matched filter shared by both receiver architectures.
//
// For an observed vector y (length K) and pilot weights W (K x n_t) the
// steering vector is beta_k(w, s) = e^{jkw} sum_v W_{kv} e^{jvs}, and the
// profiled least-squares objective is |beta^H y|^2 / ||beta||^2.

struct JadeFit {
    double shift = 0.0; // w: Doppler (digital) or time of flight (hybrid)
    double angle = 0.0; // s: angle of departure
    cplx gain{0.0, 0.0};
    double objective = 0.0;
    AcdResult acd;
};

ComplexVector jade_steering(const ComplexMatrix& weights, double shift, double angle);
double jade_objective(const ComplexVector& y, const ComplexMatrix& weights, double shift, double angle);

// beta^H y / ||beta||^2
cplx jade_gain(const ComplexVector& y, const ComplexMatrix& weights, double shift, double angle);

// Exact 1-D slice of the objective over `coordinate` (0 = shift, 1 = angle).
TrigPolyRatio jade_slice(const ComplexVector& y, const ComplexMatrix& weights, std::size_t coordinate,
                         double fixed);

// Maximizes the objective with acd_2d. Throws DegenerateError when the
// weights leave some angle with no energy.
JadeFit jade_fit(const ComplexVector& y, const ComplexMatrix& weights, const AcdConfig& cfg);

// Ascent from a given (shift, angle) instead of the grid.
JadeFit jade_fit_from(const ComplexVector& y, const ComplexMatrix& weights, double shift, double angle,
                      const AcdConfig& cfg);

// jade_fit followed by an alias check: the shifts fit.shift + 2 pi m / period
// (m = 1..period-1) are screened by an exact angle search and the ascent is
// rerun from the best of them; the better of the two fits is returned. Pilots
// that see a path through a single beam make these shifts nearly as good as
// the true one, and the grid start alone cannot separate them.
JadeFit jade_fit_aliased(const ComplexVector& y, const ComplexMatrix& weights, std::size_t period,
                         const AcdConfig& cfg);

// Non-negative-lag autocorrelation of the rows of w, summed over rows:
// G_d = sum_rows sum_v w(., v + d) conj(w(., v)), d = 0..cols-1. This is the
// Laurent form of sum_rows |sum_v w(., v) e^{jvs}|^2.
std::vector<cplx> row_autocorrelation(const ComplexMatrix& w);

} // namespace tvpce
