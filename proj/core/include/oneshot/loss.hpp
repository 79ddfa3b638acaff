#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "oneshot/network.hpp"
#include "oneshot/pairgen.hpp"

namespace oneshot {

enum class LossKind { contrastive, regularized_log };

std::string_view to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view text);

/// Probabilities are clamped to [kProbabilityEpsilon, 1 - kProbabilityEpsilon]
/// before taking logarithms.
inline constexpr double kProbabilityEpsilon = 1e-12;

struct LossConfig {
  LossKind kind = LossKind::contrastive;
  double margin = 1.0;
  double lambda = 1e-4;  // L2 weight penalty, regularized_log only

  void validate() const;
};

/// Label convention inside the losses: similar -> 1, dissimilar -> 0.
inline double target_value(PairTarget t) { return t == PairTarget::similar ? 1.0 : 0.0; }

/// d^2 for similar pairs, max(margin - d, 0)^2 for dissimilar pairs.
double contrastive_loss(double distance, PairTarget target, double margin);

/// Maps a distance to a similarity in (0, 1]: exp(-d).
double similarity_from_distance(double distance);

/// Negative log-likelihood of one pair given a similarity in (0,1).
double log_loss(double similarity, PairTarget target);

/// lambda * sum of squared weights.
double l2_penalty(const SiameseModel& model, double lambda);

/// Sum of per-pair log losses plus one L2 penalty for the whole batch.
double regularized_log_loss(std::span<const double> similarities,
                            std::span<const PairTarget> targets, double lambda,
                            const SiameseModel& model);

struct BatchGradients {
  ParameterSet gradients;  // same shapes as the model parameters
  double loss = 0.0;       // summed over pairs (plus penalty, if any)
  std::size_t pairs = 0;

  double mean_loss() const noexcept { return pairs ? loss / static_cast<double>(pairs) : 0.0; }
};

/// Exact gradients of the summed batch loss. Both twins contribute to the
/// same shared parameters. `features` holds the dataset rows referenced by
/// the pairs. Throws NumericalError on a non-finite activation or distance.
BatchGradients batch_gradients(const SiameseModel& model, const FeatureMatrix& features,
                               std::span<const InstancePair> pairs, const LossConfig& loss);

/// Loss only (no backward pass), same aggregation as batch_gradients.
double batch_loss(const SiameseModel& model, const FeatureMatrix& features,
                  std::span<const InstancePair> pairs, const LossConfig& loss);

}  // namespace oneshot
