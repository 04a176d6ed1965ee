#include <stdexcept>

#include "semsched/simulate.hpp"
#include "sim_internal.hpp"

namespace semsched {

SimulationResult simulate_aloha(const SimulationConfig& config,
                                const AlohaPolicy& policy) {
    const auto kernels = detail::prepare_kernels(config);
    const int num_sensors = static_cast<int>(config.systems.size());
    if (policy.num_sensors() != num_sensors)
        throw std::invalid_argument("policy size does not match sensor count");

    const double slot = config.delta.value;
    Rng noise(derive_seed(config.seed, kNoiseStream));
    Rng delta_rng(derive_seed(config.seed, kDeltaStream));

    std::vector<AlohaSensorState> states;
    states.reserve(num_sensors);
    std::vector<std::int64_t> next_slot(num_sensors);
    for (int g = 0; g < num_sensors; ++g) {
        states.emplace_back(derive_seed(config.seed, kSensorStreamBase + g));
        next_slot[g] = aloha_next_slot(policy, g, states[g], slot, Outcome::None);
    }

    std::vector<detail::SensorTracker> trackers(num_sensors);
    std::vector<DeliveryEvent> events;
    bool carry = true;  // the previous iteration saw no overlapping start
    double last_start = 0.0;
    double last_delta = slot;

    for (std::int64_t k = 0; k < config.num_packets; ++k) {
        int g = 0;
        for (int j = 1; j < num_sensors; ++j)
            if (next_slot[j] < next_slot[g]) g = j;  // ties keep the lowest index

        const double start = static_cast<double>(next_slot[g]) * slot;
        const double delta = config.delta.sample(delta_rng);

        // Nobody else may start strictly inside [start, start + delta). The
        // carry flag covers the mirror case: this packet started inside the
        // previous one, which the previous iteration detected.
        bool clear = true;
        for (int j = 0; j < num_sensors; ++j)
            if (j != g && static_cast<double>(next_slot[j]) * slot < start + delta)
                clear = false;

        const bool ok = clear && carry && noise.uniform() < 1.0 - config.epsilon;
        if (ok) {
            trackers[g].on_success(kernels[g], start, delta);
            if (config.record_events)
                events.push_back({g, start, start + delta});
        } else {
            ++trackers[g].failures;
        }
        carry = clear;
        next_slot[g] = aloha_next_slot(policy, g, states[g], slot,
                                       ok ? Outcome::Success : Outcome::Failure);
        last_start = start;
        last_delta = delta;
    }
    return detail::finalize(trackers, kernels, last_start + last_delta,
                            std::move(events));
}

}  // namespace semsched
