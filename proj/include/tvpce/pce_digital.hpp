#pragma once

#include "tvpce/estimation.hpp"

namespace tvpce {

// Least-squares fit of the symbol-domain factor of one rank-1 component
// (n_c x n_s x n_r) given steering vectors for modes 0 and 2:
//   a2_t = sum_{n,u} conj(a1_n a3_u) A[n,t,u] / (||a1||^2 ||a3||^2).
ComplexVector refine_a2(const ComplexTensor& component, const ComplexVector& a1_hat, const ComplexVector& a3_hat);

struct DigitalJade {
    double omega2 = 0.0;
    double varsigma = 0.0;
    cplx b{0.0, 0.0};
    double objective = 0.0;
};

// Doppler, departure angle and gain from a refined symbol-domain factor.
DigitalJade jade_digital(const ComplexVector& a2_hat, const PilotDigital& pilot, const AcdConfig& cfg);

// Per-component branch: ESPRIT on the subcarrier and receive factors,
// Vandermonde rebuild, refinement, joint Doppler/departure search.
PathEstimate digital_path_branch(const ComplexVector& a1, const ComplexVector& a2, const ComplexVector& a3,
                                 const PilotDigital& pilot, const EstimatorConfig& cfg);

// Full single-stream fully digital pipeline on a = y / s (n_c x n_s x n_r).
EstimationResult estimate_digital(const ComplexTensor& a, const PilotDigital& pilot, const EstimatorConfig& cfg);

} // namespace tvpce
