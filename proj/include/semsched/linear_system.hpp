#pragma once

#include <Eigen/Dense>

namespace semsched {

/// Continuous-time linear stochastic system dx = A x dt + dW, where the
/// noise increments have covariance D dt. One sensor monitors one system.
struct LinearSystem {
    Eigen::MatrixXd drift;      // A, n x n, units 1/time
    Eigen::MatrixXd diffusion;  // D, n x n, symmetric positive semidefinite

    int dim() const { return static_cast<int>(drift.rows()); }
};

/// Validates shapes, symmetry of the diffusion (tolerance 1e-12 relative)
/// and positive semidefiniteness (eigenvalues >= -1e-10 * ||D||).
/// Throws std::invalid_argument on violation.
LinearSystem make_system(Eigen::MatrixXd drift, Eigen::MatrixXd diffusion);

}  // namespace semsched
