#pragma once

#include <stdexcept>

namespace semsched {

/// Base class of all errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Drift matrix has no usable eigenbasis (defective or ill-conditioned).
struct NonDiagonalizableError : Error { using Error::Error; };

/// An eigenvalue pair sums to zero; the closed-form MSE kernels are singular.
struct ResonanceError : Error { using Error::Error; };

struct InvalidIntervalError : Error { using Error::Error; };

/// A loss integral came out more negative than round-off can explain.
struct NegativeResultError : Error { using Error::Error; };

/// The geometric retransmission series diverges; the bound is infinite.
struct DegenerateGeometricSumError : Error { using Error::Error; };

/// The vectorized Lyapunov system is singular (resonant drift).
struct SingularSystemError : Error { using Error::Error; };

/// Halving the integration step moved the estimate by more than noise allows.
struct StepTooCoarseError : Error { using Error::Error; };

struct ZeroDurationError : Error { using Error::Error; };

struct GridTooLargeError : Error { using Error::Error; };

struct DimensionUnsupportedError : Error { using Error::Error; };

/// Every candidate point carries an infinite MSE; no optimum exists.
struct AllInfiniteError : Error { using Error::Error; };

/// Config file / policy spec / grid file could not be parsed.
struct ConfigError : Error { using Error::Error; };

}  // namespace semsched
