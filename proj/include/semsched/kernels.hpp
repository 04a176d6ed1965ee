#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "semsched/delta_model.hpp"
#include "semsched/spectral.hpp"

namespace semsched {

/// Closed-form estimation-error kernels of one system.
///
/// upsilon solves A*Y + Y*A^H = D and phi solves A*P + P*A^H = upsilon;
/// both are assembled in the eigenbasis through the Hadamard kernel
/// b(m,n) = 1 / (lambda_m + conj(lambda_n)) and then symmetrized.
///
/// The z/g tables cache everything needed to evaluate
///   trace{ e^{A t} X e^{A^H t} } = sum_{m,n} g_x(m,n) * exp(z(m,n) * t)
/// so the per-packet loss integral costs one complex exp per matrix entry.
struct MseKernels {
    Eigen::MatrixXcd upsilon;  // Hermitian
    Eigen::MatrixXcd phi;      // Hermitian
    Eigen::MatrixXcd b;

    Eigen::MatrixXcd z;          // z(m,n) = lambda_m + conj(lambda_n)
    Eigen::MatrixXcd g_upsilon;  // trace table for upsilon
    Eigen::MatrixXcd g_phi;      // trace table for phi
    double trace_upsilon = 0.0;

    int dim() const { return static_cast<int>(z.rows()); }
};

/// Geometric-retransmission data backing the constant-interval lower bound.
struct BoundData {
    Eigen::MatrixXcd psi;  // Hermitian
    Eigen::MatrixXcd c;    // c(m,n) = (1-eps) / (1 - eps*exp(z(m,n)*delta))
    double delta = 0.0;
    double epsilon = 0.0;
};

/// Builds the kernels from a decomposition of the same system.
MseKernels compute_kernels(const SpectralData& spec, const LinearSystem& system);

/// Integral of the instantaneous estimation MSE while the delivered sample
/// ages from tau_lo to tau_hi. Nonnegative; tiny negative round-off (within
/// 1e-10 of the accumulated magnitude) is clamped to zero, anything worse
/// throws NegativeResultError. Overflow on unstable systems yields +inf.
double packet_integrated_mse(const MseKernels& kernels, double tau_lo, double tau_hi);

/// Estimation MSE at age tau: trace{ e^{A tau} Y e^{A^H tau} - Y }.
/// This is the derivative of packet_integrated_mse in its upper limit.
double instantaneous_mse(const MseKernels& kernels, double tau);

/// Worst-case time-average MSE: -trace(upsilon) when every eigenvalue has
/// real part < -1e-12 (saturation of the error covariance), +inf otherwise.
double mse_upper_bound(const MseKernels& kernels, const SpectralData& spec);

/// Per-sensor data for the constant-interval lower bound.
/// Throws DegenerateGeometricSumError when eps*exp(Re z * delta) >= 1 for
/// some entry (the retransmission series diverges; the bound is +inf).
BoundData make_bound_data(const MseKernels& kernels, const SpectralData& spec,
                          double delta, double epsilon);

/// Best achievable time-average MSE of a sensor that transmits back to back
/// with fixed transmit time delta and decoding error probability epsilon.
double mse_lower_bound_constant(const MseKernels& kernels, const SpectralData& spec,
                                double delta, double epsilon);

/// Monte-Carlo form of the lower bound for (possibly) random transmit times:
/// samples the failure count N ~ Geometric(1 - epsilon) and the transmit
/// times, and estimates E[loss] / E[service time]. Deterministic per seed.
double mse_lower_bound_general(const MseKernels& kernels, const DeltaModel& delta_model,
                               double epsilon, std::int64_t num_samples,
                               std::uint64_t seed);

}  // namespace semsched
