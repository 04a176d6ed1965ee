#pragma once

#include <Eigen/Dense>

#include "semsched/linear_system.hpp"

namespace semsched {

/// Eigendecomposition A = U diag(lambda) U^{-1} of a drift matrix, with
/// eigenvalues in a fixed deterministic order (real part descending, then
/// imaginary part descending).
struct SpectralData {
    Eigen::MatrixXcd eigvecs;      // U
    Eigen::VectorXcd eigvals;      // lambda_m
    Eigen::MatrixXcd inv_eigvecs;  // U^{-1}
    double condition = 0.0;        // condition number of U
};

/// Decomposes the drift matrix.
///
/// Throws NonDiagonalizableError when U is too ill-conditioned (> 1e10) or
/// the reconstruction U diag(lambda) U^{-1} misses A by more than
/// 1e-8 * ||A||. Throws ResonanceError when some pair satisfies
/// lambda_m + conj(lambda_n) ~ 0, which makes the closed-form kernels
/// singular.
SpectralData spectral_decompose(const LinearSystem& system);

}  // namespace semsched
