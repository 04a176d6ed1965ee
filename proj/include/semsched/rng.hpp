#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace semsched {

/// Mixes a master seed with a stream tag, so each consumer (per-sensor
/// strategy, channel noise, trial index) gets an independent stream that
/// does not shift when other consumers are added.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Seeded stream with platform-independent uniform and normal draws.
/// mt19937_64 output is fully specified by the standard; the float
/// conversions below avoid std::*_distribution, whose sequences are not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (second value cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Fixed stream tags; sensor strategies use their sensor index directly.
inline constexpr std::uint64_t kNoiseStream = 0x6e6f697365ull;   // channel noise
inline constexpr std::uint64_t kDeltaStream = 0x64656c7461ull;   // transmit times
inline constexpr std::uint64_t kSensorStreamBase = 0x100ull;     // + sensor index

}  // namespace semsched
