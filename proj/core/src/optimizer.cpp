#include "oneshot/optimizer.hpp"

#include "oneshot/error.hpp"

namespace oneshot {

void apply_update(SiameseModel& model, const ParameterSet& gradients, OptimizerState& state,
                  const OptimizerConfig& config) {
  auto& params = model.parameters();
  if (gradients.size() != params.size()) throw ConfigError("gradient layer count mismatch");
  if (state.velocity.empty()) state.velocity = zeros_like(params);
  for (std::size_t l = 0; l < params.size(); ++l) {
    if (gradients[l].weights.rows() != params[l].weights.rows() ||
        gradients[l].weights.cols() != params[l].weights.cols() ||
        gradients[l].bias.size() != params[l].bias.size()) {
      throw ConfigError("gradient shape mismatch");
    }
    auto& v = state.velocity[l];
    v.weights = config.momentum * v.weights - config.learning_rate * gradients[l].weights;
    v.bias = config.momentum * v.bias - config.learning_rate * gradients[l].bias;
    params[l].weights += v.weights;
    params[l].bias += v.bias;
  }
  ++state.steps;
}

}  // namespace oneshot
