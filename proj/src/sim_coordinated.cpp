#include <stdexcept>
#include <string>

#include "semsched/simulate.hpp"
#include "sim_internal.hpp"

namespace semsched {

SimulationResult simulate_coordinated(const SimulationConfig& config,
                                      const CoordinatedPolicy& policy) {
    const auto kernels = detail::prepare_kernels(config);
    const int num_sensors = static_cast<int>(config.systems.size());
    if (policy.num_sensors() != num_sensors)
        throw std::invalid_argument("policy size " +
                                    std::to_string(policy.num_sensors()) +
                                    " does not match sensor count");

    Rng noise(derive_seed(config.seed, kNoiseStream));
    Rng delta_rng(derive_seed(config.seed, kDeltaStream));
    CoordinatedState state = make_coordinated_state(policy);
    std::vector<detail::SensorTracker> trackers(num_sensors);
    std::vector<DeliveryEvent> events;

    Outcome last = Outcome::None;
    double clock = 0.0;
    for (std::int64_t k = 0; k < config.num_packets; ++k) {
        const int g = coordinated_next(policy, state, last);
        const double delta = config.delta.sample(delta_rng);
        const double start = clock;
        clock += delta;  // back to back: next packet starts when this one ends

        const bool ok = noise.uniform() < 1.0 - config.epsilon;
        if (ok) {
            trackers[g].on_success(kernels[g], start, delta);
            if (config.record_events)
                events.push_back({g, start, start + delta});
        } else {
            ++trackers[g].failures;
        }
        last = ok ? Outcome::Success : Outcome::Failure;
    }
    return detail::finalize(trackers, kernels, clock, std::move(events));
}

}  // namespace semsched
