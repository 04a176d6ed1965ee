#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "semsched/exec.hpp"
#include "semsched/linear_system.hpp"

namespace semsched {

/// One successfully delivered packet, as exported by the simulators.
struct DeliveryEvent {
    int sensor = 0;
    double generation_time = 0.0;
    double delivery_time = 0.0;
};

/// Settings for the trajectory Monte Carlo.
struct TrajectoryConfig {
    std::vector<Eigen::VectorXd> initial_states;  // empty -> zero vectors
    double step = 0.0;     // 0 -> min transmission delay / 50
    double horizon = 0.0;  // required, > 0
    int trials = 8;
    std::uint64_t seed = 1;
    bool check_step = true;  // verify against a half-step rerun
};

struct MonteCarloMse {
    std::vector<double> mse;
    std::vector<double> stderr_mse;
};

/// Solves A*S + S*A^T = -D by dense LU on the vectorized system.
/// For stable drift this is the steady-state error covariance.
/// Throws SingularSystemError when an eigenvalue pair sums to zero.
Eigen::MatrixXd lyapunov_solve(const LinearSystem& system);

/// Loss integral over an age interval by adaptive Simpson quadrature of the
/// closed-form instantaneous error variance. Independent of the kernel
/// tables used by the fast path.
double quadrature_L(const LinearSystem& system, double tau_lo, double tau_hi);

/// Euler-Maruyama realization of the sensor processes plus the receiver-side
/// estimator replaying a delivery log; returns the empirical time-average
/// MSE per sensor with its standard error over trials.
///
/// Trials run in parallel under ExecPolicy::Parallel with per-trial seeds
/// and are reduced in trial order, so both policies give identical results.
/// Throws StepTooCoarseError if the half-step rerun moves any estimate by
/// more than two combined standard errors.
MonteCarloMse monte_carlo_mse(const std::vector<LinearSystem>& systems,
                              const std::vector<DeliveryEvent>& schedule_trace,
                              const TrajectoryConfig& config,
                              ExecPolicy exec = ExecPolicy::Parallel);

}  // namespace semsched
