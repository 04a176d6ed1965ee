#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "semsched/rng.hpp"

namespace semsched {

/// Sentinel for an unlimited per-turn trial budget ("inf" in policy specs).
inline constexpr std::uint32_t kUnboundedTrials =
    std::numeric_limits<std::uint32_t>::max();

enum class Outcome { None, Success, Failure };

/// Centralized channel-access policy. Exactly the fields of the active
/// variant are meaningful; all vectors have one entry per sensor.
struct CoordinatedPolicy {
    enum class Kind { MaxTrials, MultipleSuccess };
    Kind kind = Kind::MaxTrials;
    std::vector<std::uint32_t> max_trials;     // per-turn trial budget P_g
    std::vector<std::uint32_t> success_quota;  // per-interval block count Q_g

    int num_sensors() const {
        return static_cast<int>(kind == Kind::MaxTrials ? max_trials.size()
                                                        : success_quota.size());
    }
};

/// max-trials with every budget 1: sensors take single turns cyclically.
CoordinatedPolicy round_robin(int num_sensors);

/// max-trials with every budget unbounded: each sensor holds the channel
/// until its packet gets through.
CoordinatedPolicy maximum_age(int num_sensors);

/// Deterministic order of the sum(Q_g) transmission blocks in one interval.
/// Block j of sensor g gets the fractional position (j + 0.5) / Q_g; blocks
/// are sorted by position, ties by sensor index. Each sensor's blocks end up
/// spread as evenly as the quotas allow.
std::vector<int> multiple_success_block_order(const std::vector<std::uint32_t>& quota);

/// Mutable scheduling state of one coordinated simulation run.
struct CoordinatedState {
    int current = 0;
    std::uint32_t trials_used = 0;
    std::vector<int> block_order;  // MultipleSuccess only
    std::size_t cursor = 0;
    bool started = false;
};

CoordinatedState make_coordinated_state(const CoordinatedPolicy& policy);

/// Picks the sensor for the next packet given the previous packet's outcome
/// (Outcome::None on the first call). Transmissions are back to back; the
/// caller owns the clock.
int coordinated_next(const CoordinatedPolicy& policy, CoordinatedState& state,
                     Outcome last_outcome);

/// Distributed (slotted-ALOHA) channel-access policy.
struct AlohaPolicy {
    enum class Kind { IndividualCap, ThresholdAdra };
    Kind kind = Kind::IndividualCap;
    std::vector<double> cap;        // per-slot access probability R_g in (0,1]
    std::vector<double> threshold;  // pause-until age (ThresholdAdra only)

    int num_sensors() const { return static_cast<int>(cap.size()); }
};

/// Per-sensor ALOHA scheduling state. Each sensor owns an RNG stream derived
/// from the master seed and its index, so draws never shift across sensors.
struct AlohaSensorState {
    Rng rng;
    std::int64_t prev_slot = -1;  // slot index of the previous transmission

    explicit AlohaSensorState(std::uint64_t seed) : rng(seed) {}
};

/// Next transmission slot of sensor g. feedback reports the outcome of the
/// sensor's previous transmission (available at slot end), Outcome::None on
/// the first call. Draws one Bernoulli(R_g) per candidate slot, in slot
/// order; threshold-ADRA additionally pauses after a success until the age
/// of the delivered sample reaches the sensor's threshold.
std::int64_t aloha_next_slot(const AlohaPolicy& policy, int sensor,
                             AlohaSensorState& state, double delta,
                             Outcome feedback);

/// Same as aloha_next_slot, in absolute time (slot index times delta).
double aloha_next_time(const AlohaPolicy& policy, int sensor,
                       AlohaSensorState& state, double delta, Outcome feedback);

}  // namespace semsched
