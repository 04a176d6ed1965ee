#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "semsched/errors.hpp"
#include "semsched/simulate.hpp"

namespace semsched::detail {

inline std::vector<MseKernels> prepare_kernels(const SimulationConfig& config) {
    if (config.systems.empty())
        throw std::invalid_argument("config needs at least one system");
    if (config.num_packets < 1)
        throw std::invalid_argument("num_packets must be >= 1");
    if (!(config.epsilon >= 0.0 && config.epsilon < 1.0))
        throw std::invalid_argument("epsilon must be in [0, 1)");
    if (!(config.delta.value > 0.0))
        throw std::invalid_argument("delta must be positive");

    std::vector<MseKernels> kernels;
    kernels.reserve(config.systems.size());
    for (const auto& sys : config.systems)
        kernels.push_back(compute_kernels(spectral_decompose(sys), sys));
    return kernels;
}

inline SimulationResult finalize(std::vector<SensorTracker>& trackers,
                                 const std::vector<MseKernels>& kernels,
                                 double final_time,
                                 std::vector<DeliveryEvent> events) {
    if (!(final_time > 0.0)) throw ZeroDurationError("simulated time is zero");

    const int num_sensors = static_cast<int>(trackers.size());
    SimulationResult res;
    res.total_time = final_time;
    res.mse.resize(num_sensors);
    res.aoi_mean.resize(num_sensors);
    res.integrated_loss.resize(num_sensors);
    res.successes.resize(num_sensors);
    res.failures.resize(num_sensors);
    for (int g = 0; g < num_sensors; ++g) {
        trackers[g].flush(kernels[g], final_time);
        res.integrated_loss[g] = trackers[g].loss;
        res.mse[g] = trackers[g].loss / final_time;
        res.aoi_mean[g] = trackers[g].age_integral / final_time;
        res.successes[g] = trackers[g].successes;
        res.failures[g] = trackers[g].failures;
    }
    res.events = std::move(events);
    return res;
}

}  // namespace semsched::detail
