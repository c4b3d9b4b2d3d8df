#pragma once

#include <stdexcept>
#include <string>

namespace tvpce {

// Precondition violations (bad extents, mismatched shapes, out-of-range modes)
// are reported with std::invalid_argument; non-finite numerical input with
// std::domain_error. The types below cover failures a caller may want to
// handle separately.

// A factor, steering vector or pilot carries no usable energy.
struct DegenerateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Every restart of an iterative solver failed.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rejection sampling could not satisfy the requested path separation.
struct SeparationInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed file contents or unreadable/unwritable files.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid campaign/CLI configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace tvpce
