#pragma once

#include "semsched/rng.hpp"

namespace semsched {

/// Transmit-time model. Only the constant model is implemented; the draw
/// interface leaves room for stochastic transmit times later.
struct DeltaModel {
    double value = 1.0;

    double sample(Rng&) const { return value; }
};

}  // namespace semsched
