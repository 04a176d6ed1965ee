#include "semsched/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semsched {

namespace {

void check_sensor_count(int num_sensors) {
    if (num_sensors < 1) throw std::invalid_argument("need at least one sensor");
}

}  // namespace

CoordinatedPolicy round_robin(int num_sensors) {
    check_sensor_count(num_sensors);
    CoordinatedPolicy p;
    p.kind = CoordinatedPolicy::Kind::MaxTrials;
    p.max_trials.assign(static_cast<std::size_t>(num_sensors), 1u);
    return p;
}

CoordinatedPolicy maximum_age(int num_sensors) {
    check_sensor_count(num_sensors);
    CoordinatedPolicy p;
    p.kind = CoordinatedPolicy::Kind::MaxTrials;
    p.max_trials.assign(static_cast<std::size_t>(num_sensors), kUnboundedTrials);
    return p;
}

std::vector<int> multiple_success_block_order(const std::vector<std::uint32_t>& quota) {
    struct Block {
        std::int64_t num;  // position (j + 0.5) / Q held exactly as (2j+1, 2Q)
        std::int64_t den;
        int sensor;
    };
    std::vector<Block> blocks;
    for (int g = 0; g < static_cast<int>(quota.size()); ++g) {
        if (quota[g] < 1) throw std::invalid_argument("success quotas must be >= 1");
        for (std::uint32_t j = 0; j < quota[g]; ++j)
            blocks.push_back({2 * static_cast<std::int64_t>(j) + 1,
                              2 * static_cast<std::int64_t>(quota[g]), g});
    }
    std::stable_sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) {
        const std::int64_t lhs = a.num * b.den;
        const std::int64_t rhs = b.num * a.den;
        if (lhs != rhs) return lhs < rhs;
        return a.sensor < b.sensor;
    });
    std::vector<int> order;
    order.reserve(blocks.size());
    for (const auto& b : blocks) order.push_back(b.sensor);
    return order;
}

CoordinatedState make_coordinated_state(const CoordinatedPolicy& policy) {
    check_sensor_count(policy.num_sensors());
    CoordinatedState st;
    if (policy.kind == CoordinatedPolicy::Kind::MultipleSuccess)
        st.block_order = multiple_success_block_order(policy.success_quota);
    return st;
}

int coordinated_next(const CoordinatedPolicy& policy, CoordinatedState& state,
                     Outcome last_outcome) {
    const int num_sensors = policy.num_sensors();
    if (policy.kind == CoordinatedPolicy::Kind::MaxTrials) {
        if (!state.started) {
            state.started = true;
            state.current = 0;
            state.trials_used = 1;
            return state.current;
        }
        const std::uint32_t budget = policy.max_trials[state.current];
        const bool pass_turn =
            last_outcome == Outcome::Success || state.trials_used >= budget;
        if (pass_turn) {
            state.current = (state.current + 1) % num_sensors;
            state.trials_used = 1;
        } else {
            ++state.trials_used;
        }
        return state.current;
    }

    // MultipleSuccess: march through the block order, one success per block.
    if (!state.started) {
        state.started = true;
        state.cursor = 0;
        return state.block_order[state.cursor];
    }
    if (last_outcome == Outcome::Success)
        state.cursor = (state.cursor + 1) % state.block_order.size();
    return state.block_order[state.cursor];
}

std::int64_t aloha_next_slot(const AlohaPolicy& policy, int sensor,
                             AlohaSensorState& state, double delta,
                             Outcome feedback) {
    const double cap = policy.cap[sensor];
    std::int64_t candidate = state.prev_slot + 1;  // never during own packet
    if (policy.kind == AlohaPolicy::Kind::ThresholdAdra &&
        feedback == Outcome::Success) {
        // Pause until the delivered sample, generated at prev_slot * delta,
        // ages past the threshold.
        const std::int64_t resume = state.prev_slot +
            static_cast<std::int64_t>(
                std::ceil(policy.threshold[sensor] / delta - 1e-12));
        candidate = std::max(candidate, resume);
    }
    while (state.rng.uniform() >= cap) ++candidate;
    state.prev_slot = candidate;
    return candidate;
}

double aloha_next_time(const AlohaPolicy& policy, int sensor,
                       AlohaSensorState& state, double delta, Outcome feedback) {
    return static_cast<double>(
               aloha_next_slot(policy, sensor, state, delta, feedback)) *
           delta;
}

}  // namespace semsched
