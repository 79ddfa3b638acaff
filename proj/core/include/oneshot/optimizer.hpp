#pragma once

#include "oneshot/network.hpp"

namespace oneshot {

struct OptimizerConfig {
  double learning_rate = 0.01;
  double momentum = 0.9;
};

/// Velocity buffers; empty until the first update.
struct OptimizerState {
  ParameterSet velocity;
  std::size_t steps = 0;
};

/// Heavy-ball momentum step:
///   v <- momentum * v - learning_rate * g
///   theta <- theta + v
void apply_update(SiameseModel& model, const ParameterSet& gradients, OptimizerState& state,
                  const OptimizerConfig& config);

}  // namespace oneshot
