#pragma once

#include <stdexcept>
#include <string>

namespace orthosolve {

// Base class for everything thrown by the library.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeMismatch : SolverError {
    using SolverError::SolverError;
};

// Iterative routine failed to stabilize within its budget.
struct NonConvergence : SolverError {
    using SolverError::SolverError;
};

struct RankDeficient : SolverError {
    using SolverError::SolverError;
};

struct NumericalBreakdown : SolverError {
    using SolverError::SolverError;
};

struct InfeasibleStart : SolverError {
    using SolverError::SolverError;
};

struct DegenerateInput : SolverError {
    using SolverError::SolverError;
};

struct DomainError : SolverError {
    using SolverError::SolverError;
};

struct BacktrackExhausted : SolverError {
    using SolverError::SolverError;
};

struct EmptyBatch : SolverError {
    using SolverError::SolverError;
};

struct IoError : SolverError {
    using SolverError::SolverError;
};

struct ConfigError : SolverError {
    using SolverError::SolverError;
};

}  // namespace orthosolve
