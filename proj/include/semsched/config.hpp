#pragma once

#include <string>
#include <vector>

#include "semsched/simulate.hpp"
#include "semsched/sweep.hpp"

namespace semsched {

/// One experiment: systems, channel parameters, seeds, the policy to run
/// and the weight vectors to scan. Loaded from / saved to a JSON file.
struct ExperimentConfig {
    std::vector<LinearSystem> systems;
    double delta = 1.0;
    double epsilon = 0.05;
    std::int64_t num_packets = 1;
    std::vector<std::uint64_t> seeds;
    std::string policy;  // policy spec string, may be empty
    std::vector<std::vector<double>> weights;
    std::string output_dir;

    SimulationConfig simulation(std::uint64_t seed) const {
        SimulationConfig sc;
        sc.systems = systems;
        sc.delta.value = delta;
        sc.epsilon = epsilon;
        sc.num_packets = num_packets;
        sc.seed = seed;
        return sc;
    }
};

/// Loads and validates a config file. Throws ConfigError with a readable
/// message on any schema or value problem (unknown keys included).
ExperimentConfig load_experiment_config(const std::string& path);

/// Writes the config back out; load(save(c)) reproduces c exactly.
void save_experiment_config(const ExperimentConfig& config, const std::string& path);

/// Parses a policy spec string:
///   max-trials:[P1,P2,...]          positive integers or inf
///   multiple-success:[Q1,Q2,...]    positive integers
///   individual-cap:[R1,R2,...]      reals in (0,1]
///   threshold-adra:[R1,...]:[t1,...]  caps plus nonnegative age thresholds
/// Throws ConfigError on bad syntax or a sensor-count mismatch.
PolicyVariant parse_policy_spec(const std::string& spec, int num_sensors);

/// Loads a parameter grid file (JSON). Grids without their own seed list
/// inherit default_seeds.
ParameterGrid load_grid(const std::string& path,
                        const std::vector<std::uint64_t>& default_seeds);

}  // namespace semsched
