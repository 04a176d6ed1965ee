#pragma once

#include <cstdint>
#include <vector>

#include "semsched/delta_model.hpp"
#include "semsched/kernels.hpp"
#include "semsched/linear_system.hpp"
#include "semsched/oracle.hpp"
#include "semsched/strategies.hpp"

namespace semsched {

struct SimulationConfig {
    std::vector<LinearSystem> systems;
    DeltaModel delta;              // transmit-time model (constant)
    double epsilon = 0.05;         // decoding error probability
    std::int64_t num_packets = 1;  // K
    std::uint64_t seed = 0;
    bool record_events = false;    // export the delivery log for the oracle
};

/// Per-sensor outcome of one seeded run. mse = integrated_loss / total_time.
struct SimulationResult {
    std::vector<double> mse;
    std::vector<double> aoi_mean;
    std::vector<double> integrated_loss;
    double total_time = 0.0;
    std::vector<std::int64_t> successes;
    std::vector<std::int64_t> failures;
    std::vector<DeliveryEvent> events;  // only if record_events
};

/// Centralized scheduling: the policy picks the sensor of every packet,
/// packets run back to back, only receiver noise causes losses. On each
/// success the closed-form loss integral of the replaced sample is added;
/// at the end every sensor is flushed to the common final time.
SimulationResult simulate_coordinated(const SimulationConfig& config,
                                      const CoordinatedPolicy& policy);

/// Distributed slotted ALOHA: sensors schedule independently; a packet is
/// decoded only when no other transmission starts during it, the previous
/// iteration saw no such overlap either (carry flag), and receiver noise
/// spares it.
SimulationResult simulate_aloha(const SimulationConfig& config,
                                const AlohaPolicy& policy);

namespace detail {

/// Shared per-sensor bookkeeping of the two event loops.
struct SensorTracker {
    double last_stored_time = 0.0;  // generation time of the delivered sample
    double stored_delay = 0.0;      // its age at delivery
    double loss = 0.0;
    double age_integral = 0.0;
    std::int64_t successes = 0;
    std::int64_t failures = 0;

    void on_success(const MseKernels& kernels, double start, double delta) {
        const double age_hi = start + delta - last_stored_time;
        loss += packet_integrated_mse(kernels, stored_delay, age_hi);
        age_integral += 0.5 * (age_hi * age_hi - stored_delay * stored_delay);
        last_stored_time = start;
        stored_delay = delta;
        ++successes;
    }

    void flush(const MseKernels& kernels, double final_time) {
        const double age_hi = final_time - last_stored_time;
        loss += packet_integrated_mse(kernels, stored_delay, age_hi);
        age_integral += 0.5 * (age_hi * age_hi - stored_delay * stored_delay);
    }
};

}  // namespace detail

}  // namespace semsched
