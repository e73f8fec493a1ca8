// errors.hpp — Exception categories raised by the simulation engine

#pragma once

#include <stdexcept>
#include <string>

namespace jcm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape mismatch between operands.
struct DimensionError : Error {
    using Error::Error;
};

struct NotHermitianError : Error {
    using Error::Error;
};

struct ConvergenceError : Error {
    using Error::Error;
};

// Population reached the highest kept Fock level, or a requested state does
// not fit in the truncated space.
struct TruncationError : Error {
    using Error::Error;
};

// Density-matrix health check failed during integration (trace, Hermiticity
// or positivity outside tolerance).
struct StateHealthError : Error {
    using Error::Error;
};

// Eigenvector branch could not be followed unambiguously.
struct TrackingError : Error {
    using Error::Error;
};

// Phase requested at a point where the reference overlap vanishes.
struct SingularPhaseError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

// Output could not be written.
struct IoError : Error {
    using Error::Error;
};

} // namespace jcm
