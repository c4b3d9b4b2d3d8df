#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tvpce/tensor.hpp"

namespace tvpce {

// Ratio of trigonometric polynomials on the unit circle,
//
//   J(w) = |f(e^{jw})|^2 / g(w),   f(z) = sum_k num[k] z^k,
//   g(w) = den[0] + 2 Re sum_{d>=1} den[d] e^{jdw},
//
// i.e. `den` holds the non-negative-lag half of a Hermitian Laurent sequence
// (den[0] real). An empty `den` means g == 1. Construction rejects a g that is
// not strictly positive on a dense grid.
class TrigPolyRatio {
public:
    static TrigPolyRatio make(std::vector<cplx> num, std::vector<cplx> den = {});

    const std::vector<cplx>& numerator() const { return num_; }
    const std::vector<cplx>& denominator() const { return den_; }

    double value(double w) const;
    double numerator_value(double w) const;
    double denominator_value(double w) const;

private:
    TrigPolyRatio(std::vector<cplx> num, std::vector<cplx> den) : num_(std::move(num)), den_(std::move(den)) {}

    std::vector<cplx> num_;
    std::vector<cplx> den_;
};

// J evaluated at w_k = 2 pi k / points (k = 0..points-1) through an FFT.
std::vector<double> evaluate_on_grid(const TrigPolyRatio& r, std::size_t points);

// Angle of grid point k out of `points`, wrapped to (-pi, pi].
double grid_angle(std::size_t k, std::size_t points);

struct UnitCircleMax {
    double omega = 0.0;
    double value = 0.0;
    bool degenerate = false; // numerator identically zero
};

// Global maximizer of a TrigPolyRatio over (-pi, pi].
//
// The stationarity condition dJ/dw = 0 is cleared of denominators into one
// polynomial in z whose roots are the companion-matrix eigenvalues. Roots
// within 1e-6 of the unit circle, plus the best point of a 4096-point grid,
// are Newton-polished and compared. Ties go to the smallest |w|.
UnitCircleMax max_unit_circle(const TrigPolyRatio& r);

// [1, e^{jw}, ..., e^{j(n-1)w}]
ComplexVector vandermonde(double omega, std::size_t n);

// Single-tone ESPRIT: dominant left singular vector of the ceil(N/2)-row
// Hankel matrix, least-squares shift invariance, returns the rotation angle in
// (-pi, pi]. Needs at least three samples.
double esprit_tone(const ComplexVector& v);

struct AcdConfig {
    std::size_t max_sweeps = 50;
    double rel_tol = 1e-10;
    std::size_t starts = 1;
    std::size_t grid_oversample = 8;
    std::uint64_t seed = 0; // only used for starts beyond the number of grid peaks
};

// Returns the exact 1-D objective over `coordinate` (0 or 1) with the other
// coordinate held at `fixed`.
using SliceBuilder = std::function<TrigPolyRatio(std::size_t coordinate, double fixed)>;

struct AcdResult {
    double omega_a = 0.0;
    double omega_b = 0.0;
    double objective = 0.0;
    std::vector<double> history; // objective after every coordinate update of the winning start
    std::size_t sweeps = 0;
};

// Alternating coordinate ascent where each coordinate update is an exact
// max_unit_circle line search. Starts at the best point(s) of an oversampled
// 2-D grid.
AcdResult acd_2d(const SliceBuilder& build_slice, const AcdConfig& cfg);

// The same ascent from an explicit start (a, b); grid and start settings in
// `cfg` are ignored.
AcdResult acd_2d_from(const SliceBuilder& build_slice, double a, double b, const AcdConfig& cfg);

} // namespace tvpce
