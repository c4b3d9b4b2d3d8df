#pragma once

#include "tvpce/estimation.hpp"

namespace tvpce {

// Arrival angle from a combiner-domain factor: maximizes
// |r(psi)^H a3|^2 / ||r(psi)||^2 with r_m(psi) = sum_u r_{mu} e^{j u psi}.
double estimate_psi_hybrid(const ComplexVector& a3_hat, const ComplexMatrix& combiner);

// r(psi), the combiner response to a plane wave.
ComplexVector combiner_response(const ComplexMatrix& combiner, double psi);

// a1_n = sum_{t,m} conj(a2_t a3_m) Y[n,t,m] / (||a2||^2 ||a3||^2).
ComplexVector refine_a1(const ComplexTensor& component, const ComplexVector& a2_hat, const ComplexVector& a3_hat);

struct HybridJade {
    double omega1 = 0.0;
    double varsigma = 0.0;
    cplx b{0.0, 0.0};
    double objective = 0.0;
};

HybridJade jade_hybrid(const ComplexVector& a1_hat, const PilotHybrid& pilot, const AcdConfig& cfg);

PathEstimate hybrid_path_branch(const ComplexVector& a1, const ComplexVector& a2, const ComplexVector& a3,
                                const PilotHybrid& pilot, const EstimatorConfig& cfg);

// Multi-stream hybrid-combiner pipeline on y (n_c x n_s x d_r).
EstimationResult estimate_hybrid(const ComplexTensor& y, const PilotHybrid& pilot, const EstimatorConfig& cfg);

} // namespace tvpce
