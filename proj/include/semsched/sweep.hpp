#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "semsched/exec.hpp"
#include "semsched/simulate.hpp"

namespace semsched {

using PolicyVariant = std::variant<CoordinatedPolicy, AlohaPolicy>;

/// Canonical policy spec string, e.g. "max-trials:[2,inf]" or
/// "threshold-adra:[0.3,0.3]:[0,5]". Round-trips through parse_policy_spec.
std::string policy_spec_string(const PolicyVariant& policy);

/// Cartesian parameter grid of one policy family. Every sensor sweeps the
/// same per-parameter value list; each tuple is replicated over the seeds.
struct ParameterGrid {
    std::string family;  // max-trials | multiple-success | individual-cap | threshold-adra
    std::vector<std::uint32_t> max_trials_values;  // kUnboundedTrials = inf
    std::vector<std::uint32_t> quota_values;
    std::vector<double> cap_values;
    std::vector<double> threshold_values;
    std::vector<std::uint64_t> seeds;
    std::size_t max_points = 10000;
};

/// Expands the grid for a given sensor count.
/// Throws GridTooLargeError past grid.max_points and ConfigError on an
/// unknown family or empty value lists.
std::vector<PolicyVariant> expand_grid(const ParameterGrid& grid, int num_sensors);

/// One evaluated parameter tuple: seed-averaged MSE vector with standard
/// errors. Tuples that overflow (starved unstable systems) keep their slot
/// and are flagged infinite instead of being dropped.
struct AchievablePoint {
    std::string params;
    std::vector<double> mse;
    std::vector<double> stderr_mse;
    bool infinite = false;
};

/// Runs the matching simulator for every tuple x seed. Tasks are
/// independent; under ExecPolicy::Parallel they run in an OpenMP loop and
/// are reduced in (tuple, seed) order, bit-identical to the serial path.
std::vector<AchievablePoint> evaluate_grid(const ParameterGrid& grid,
                                           const SimulationConfig& base,
                                           ExecPolicy exec = ExecPolicy::Parallel);

/// Serial reference implementation of evaluate_grid.
std::vector<AchievablePoint> evaluate_grid_serial(const ParameterGrid& grid,
                                                  const SimulationConfig& base);

/// Points not weakly dominated in every coordinate (with strict domination
/// somewhere). Output sorted lexicographically by MSE vector; exact
/// duplicates keep the first occurrence.
std::vector<AchievablePoint> pareto_filter(const std::vector<AchievablePoint>& points);

/// Vertices of the lower-left convex hull over the finite points, in
/// increasing first-coordinate order: the frontier achievable when policies
/// may be alternated over time. Two-sensor only.
std::vector<AchievablePoint> time_sharing_hull(const std::vector<AchievablePoint>& points);

/// Pareto points plus their time-sharing hull.
struct Frontier {
    std::vector<AchievablePoint> points;
    std::vector<AchievablePoint> hull;  // empty unless exactly two sensors
};

/// Pareto-filters the points and, for two sensors, attaches the hull.
Frontier make_frontier(const std::vector<AchievablePoint>& points);

/// argmin of sum_g alpha_g * mse_g over the finite points; ties resolved by
/// lexicographic MSE then params. Throws AllInfiniteError when every point
/// is flagged infinite.
AchievablePoint weighted_best(const std::vector<AchievablePoint>& points,
                              const std::vector<double>& alpha);

}  // namespace semsched
