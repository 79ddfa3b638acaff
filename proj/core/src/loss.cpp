#include "oneshot/loss.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "activation.hpp"
#include "oneshot/error.hpp"

namespace oneshot {
namespace {

struct PairTerm {
  double loss = 0.0;
  double d_loss_d_distance = 0.0;
};

PairTerm pair_term(double d, PairTarget target, const LossConfig& cfg) {
  if (cfg.kind == LossKind::contrastive) {
    if (target == PairTarget::similar) return {d * d, 2.0 * d};
    const double gap = cfg.margin - d;
    if (gap <= 0.0) return {0.0, 0.0};
    return {gap * gap, -2.0 * gap};
  }
  const double raw = similarity_from_distance(d);
  const double s = std::clamp(raw, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
  const bool clamped = s != raw;
  const double y = target_value(target);
  const double loss = -(y * std::log(s) + (1.0 - y) * std::log(1.0 - s));
  if (clamped) return {loss, 0.0};
  const double dl_ds = -(y / s - (1.0 - y) / (1.0 - s));
  return {loss, dl_ds * -s};
}

struct ForwardCache {
  std::vector<FeatureMatrix> inputs;          // input to layer l
  std::vector<FeatureMatrix> pre_activation;  // z of layer l
  FeatureMatrix output;
};

// Left twin rows occupy [0, n), right twin rows [n, 2n).
ForwardCache forward_pairs(const SiameseModel& model, const FeatureMatrix& features,
                           std::span<const InstancePair> pairs, bool keep_cache) {
  const auto n = static_cast<Eigen::Index>(pairs.size());
  if (static_cast<std::size_t>(features.cols()) != model.input_width()) {
    throw ConfigError(fmt::format("feature width {} does not match model input width {}",
                                  features.cols(), model.input_width()));
  }
  FeatureMatrix x(2 * n, features.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = pairs[static_cast<std::size_t>(i)];
    if (p.left >= static_cast<std::size_t>(features.rows()) ||
        p.right >= static_cast<std::size_t>(features.rows())) {
      throw ConfigError("pair references a row outside the feature matrix");
    }
    x.row(i) = features.row(static_cast<Eigen::Index>(p.left));
    x.row(n + i) = features.row(static_cast<Eigen::Index>(p.right));
  }

  ForwardCache cache;
  const auto& params = model.parameters();
  FeatureMatrix h = std::move(x);
  for (std::size_t l = 0; l < params.size(); ++l) {
    FeatureMatrix z = h * params[l].weights;
    z.rowwise() += params[l].bias.transpose();
    if (!z.allFinite()) {
      throw NumericalError(fmt::format("numerical overflow in layer {}", l), l);
    }
    if (keep_cache) {
      cache.inputs.push_back(std::move(h));
      cache.pre_activation.push_back(z);
    }
    if (l + 1 < params.size()) detail::activate_inplace(z, model.hidden_activation());
    h = std::move(z);
  }
  cache.output = std::move(h);
  return cache;
}

}  // namespace

std::string_view to_string(LossKind kind) {
  return kind == LossKind::contrastive ? "contrastive" : "regularized-log";
}

LossKind parse_loss_kind(std::string_view text) {
  if (text == "contrastive") return LossKind::contrastive;
  if (text == "regularized-log" || text == "regularized_log") return LossKind::regularized_log;
  throw ConfigError(fmt::format("unknown loss '{}'", text));
}

void LossConfig::validate() const {
  if (kind == LossKind::contrastive && !(margin > 0.0)) {
    throw ConfigError("contrastive loss needs a positive margin");
  }
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be nonnegative");
}

double contrastive_loss(double distance, PairTarget target, double margin) {
  if (target == PairTarget::similar) return distance * distance;
  const double gap = std::max(margin - distance, 0.0);
  return gap * gap;
}

double similarity_from_distance(double distance) { return std::exp(-distance); }

double log_loss(double similarity, PairTarget target) {
  const double s = std::clamp(similarity, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
  const double y = target_value(target);
  return -(y * std::log(s) + (1.0 - y) * std::log(1.0 - s));
}

double l2_penalty(const SiameseModel& model, double lambda) {
  return lambda * model.weight_norm_squared();
}

double regularized_log_loss(std::span<const double> similarities,
                            std::span<const PairTarget> targets, double lambda,
                            const SiameseModel& model) {
  if (similarities.size() != targets.size()) {
    throw ConfigError("similarities and targets differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < similarities.size(); ++i) {
    total += log_loss(similarities[i], targets[i]);
  }
  return total + l2_penalty(model, lambda);
}

BatchGradients batch_gradients(const SiameseModel& model, const FeatureMatrix& features,
                               std::span<const InstancePair> pairs, const LossConfig& loss) {
  if (pairs.empty()) throw ConfigError("cannot compute gradients of an empty batch");
  loss.validate();

  auto cache = forward_pairs(model, features, pairs, true);
  const auto n = static_cast<Eigen::Index>(pairs.size());
  const auto& params = model.parameters();
  const std::size_t last = params.size() - 1;

  BatchGradients result;
  result.gradients = zeros_like(params);
  result.pairs = pairs.size();

  // d(loss)/d(embedding) for both twins, stacked like the forward pass.
  FeatureMatrix delta(2 * n, cache.output.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::RowVectorXd diff = cache.output.row(i) - cache.output.row(n + i);
    const double d = diff.norm();
    if (!std::isfinite(d)) {
      throw NumericalError(fmt::format("numerical overflow in layer {}", last), last);
    }
    const auto term = pair_term(d, pairs[static_cast<std::size_t>(i)].target, loss);
    result.loss += term.loss;
    Eigen::RowVectorXd g;
    if (loss.kind == LossKind::contrastive && pairs[static_cast<std::size_t>(i)].target ==
                                                  PairTarget::similar) {
      g = 2.0 * diff;  // d(d^2)/d(diff), defined at d = 0
    } else if (d > 0.0) {
      g = (term.d_loss_d_distance / d) * diff;
    } else {
      g = Eigen::RowVectorXd::Zero(diff.size());
    }
    delta.row(i) = g;
    delta.row(n + i) = -g;
  }

  for (std::size_t l = params.size(); l-- > 0;) {
    auto& grad = result.gradients[l];
    grad.weights.noalias() = cache.inputs[l].transpose() * delta;
    grad.bias = delta.colwise().sum().transpose();
    if (l == 0) break;
    FeatureMatrix upstream = delta * params[l].weights.transpose();
    delta = upstream.cwiseProduct(
        detail::activation_derivative(cache.pre_activation[l - 1], model.hidden_activation()));
    if (!delta.allFinite()) {
      throw NumericalError(fmt::format("numerical overflow in layer {}", l - 1), l - 1);
    }
  }

  if (loss.kind == LossKind::regularized_log && loss.lambda > 0.0) {
    result.loss += l2_penalty(model, loss.lambda);
    for (std::size_t l = 0; l < params.size(); ++l) {
      result.gradients[l].weights += 2.0 * loss.lambda * params[l].weights;
    }
  }
  return result;
}

double batch_loss(const SiameseModel& model, const FeatureMatrix& features,
                  std::span<const InstancePair> pairs, const LossConfig& loss) {
  loss.validate();
  if (pairs.empty()) return 0.0;
  const auto cache = forward_pairs(model, features, pairs, false);
  const auto n = static_cast<Eigen::Index>(pairs.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = (cache.output.row(i) - cache.output.row(n + i)).norm();
    total += pair_term(d, pairs[static_cast<std::size_t>(i)].target, loss).loss;
  }
  if (loss.kind == LossKind::regularized_log) total += l2_penalty(model, loss.lambda);
  return total;
}

}  // namespace oneshot
