#pragma once

#include <cstddef>
#include <vector>

#include "tvpce/tensor.hpp"

namespace tvpce {

struct MdlReport {
    std::vector<std::size_t> per_mode_estimates;
    std::size_t l_hat = 0;                               // max over per_mode_estimates
    std::vector<std::vector<double>> eigenvalue_profiles; // squared singular values / N, descending
};

// Minimum description length rank estimate of a data matrix.
//
// With p = min(rows, cols), N = max(rows, cols) and lambda_i the squared
// singular values divided by N, returns the k in [0, p-1] minimizing
//   -N (p-k) log(GM(lambda_{k+1..p}) / AM(lambda_{k+1..p})) + k (2p-k) log(N) / 2.
// Eigenvalues are floored at max(1e-30, (N eps)^2) * lambda_max, the level
// below which squared singular values are roundoff. A zero matrix yields 0.
std::size_t mdl_rank(const ComplexMatrix& m);

// Same, but also returns the eigenvalue profile used.
std::size_t mdl_rank(const ComplexMatrix& m, std::vector<double>& eigenvalues);

// Applies mdl_rank to every unfolding of a third-order tensor.
MdlReport estimate_model_order(const ComplexTensor& t);

} // namespace tvpce
