#pragma once

#include <cstdint>
#include <vector>

#include "tvpce/tensor.hpp"

namespace tvpce {

struct CpSolveConfig {
    std::size_t rank = 1;
    std::size_t max_iters = 500;
    double rel_tol = 1e-8;      // stop when the residual ratio changes by less than this, relatively
    std::size_t restarts = 5;   // first restart is HOSVD-initialized, the rest random
    std::uint64_t seed = 0;
};

struct CpResult {
    CpFactors factors;                 // normalized, see normalize_factors
    std::vector<double> fit_history;   // residual ratio after every iteration of the winning restart
    double residual = 0.0;             // ||t - cp_compose(factors)||_F / ||t||_F
    std::size_t iterations = 0;
    std::size_t failed_restarts = 0;
};

// Moves all scale and phase of every component into a2: columns of a1 and a3
// end up with unit norm and a real non-negative leading entry. Throws
// DegenerateError when a mode-1 or mode-3 column is zero.
CpFactors normalize_factors(const CpFactors& f);

// Rank-K CP decomposition of a third-order tensor by alternating least
// squares. Returns the restart with the smallest relative residual.
CpResult cp_als(const ComplexTensor& t, const CpSolveConfig& cfg);

} // namespace tvpce
