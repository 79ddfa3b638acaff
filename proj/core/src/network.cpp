#include "oneshot/network.hpp"

#include <cmath>

#include <fmt/format.h>

#include "activation.hpp"
#include "oneshot/error.hpp"

namespace oneshot {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::linear: return "linear";
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
  }
  return "unknown";
}

Activation parse_activation(std::string_view text) {
  if (text == "linear") return Activation::linear;
  if (text == "relu") return Activation::relu;
  if (text == "tanh") return Activation::tanh;
  if (text == "sigmoid") return Activation::sigmoid;
  throw ConfigError(fmt::format("unknown activation '{}'", text));
}

ParameterSet zeros_like(const ParameterSet& params) {
  ParameterSet out;
  out.reserve(params.size());
  for (const auto& p : params) {
    out.push_back({Eigen::MatrixXd::Zero(p.weights.rows(), p.weights.cols()),
                   Eigen::VectorXd::Zero(p.bias.size())});
  }
  return out;
}

EmbeddingNetwork::EmbeddingNetwork(std::vector<std::size_t> layer_sizes,
                                   Activation hidden_activation)
    : layer_sizes_(std::move(layer_sizes)), hidden_activation_(hidden_activation) {
  if (layer_sizes_.size() < 2) {
    throw ConfigError("a network needs at least an input and an output width");
  }
  for (auto w : layer_sizes_) {
    if (w == 0) throw ConfigError("layer widths must be positive");
  }
  for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
    const auto in = static_cast<Eigen::Index>(layer_sizes_[l]);
    const auto out = static_cast<Eigen::Index>(layer_sizes_[l + 1]);
    params_.push_back({Eigen::MatrixXd::Zero(in, out), Eigen::VectorXd::Zero(out)});
  }
}

FeatureMatrix EmbeddingNetwork::forward(const FeatureMatrix& rows) const {
  if (static_cast<std::size_t>(rows.cols()) != input_width()) {
    throw ConfigError(fmt::format("input width {} does not match network input width {}",
                                  rows.cols(), input_width()));
  }
  FeatureMatrix h = rows;
  for (std::size_t l = 0; l < params_.size(); ++l) {
    FeatureMatrix z = h * params_[l].weights;
    z.rowwise() += params_[l].bias.transpose();
    if (l + 1 < params_.size()) detail::activate_inplace(z, hidden_activation_);
    h = std::move(z);
  }
  return h;
}

Eigen::VectorXd EmbeddingNetwork::forward(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != input_width()) {
    throw ConfigError(fmt::format("input width {} does not match network input width {}",
                                  x.size(), input_width()));
  }
  Eigen::VectorXd h = x;
  for (std::size_t l = 0; l < params_.size(); ++l) {
    Eigen::VectorXd z = params_[l].weights.transpose() * h + params_[l].bias;
    if (l + 1 < params_.size()) detail::activate_inplace(z, hidden_activation_);
    h = std::move(z);
  }
  return h;
}

SiameseModel::SiameseModel(std::vector<std::size_t> layer_sizes, Activation hidden_activation)
    : network_(std::move(layer_sizes), hidden_activation) {}

double SiameseModel::weight_norm_squared() const {
  double total = 0.0;
  for (const auto& p : parameters()) total += p.weights.squaredNorm();
  return total;
}

bool SiameseModel::all_finite() const {
  for (const auto& p : parameters()) {
    if (!p.weights.allFinite() || !p.bias.allFinite()) return false;
  }
  return true;
}

SiameseModel init_model(const std::vector<std::size_t>& layer_sizes, Activation hidden_activation,
                        Rng& rng) {
  SiameseModel model(layer_sizes, hidden_activation);
  for (auto& p : model.parameters()) {
    const double bound =
        std::sqrt(6.0 / static_cast<double>(p.weights.rows() + p.weights.cols()));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index c = 0; c < p.weights.cols(); ++c) {
      for (Eigen::Index r = 0; r < p.weights.rows(); ++r) p.weights(r, c) = dist(rng);
    }
    p.bias.setZero();
  }
  return model;
}

Eigen::VectorXd embed(const SiameseModel& model, const Eigen::VectorXd& x) {
  return model.network().forward(x);
}

double distance(const SiameseModel& model, const Eigen::VectorXd& x1, const Eigen::VectorXd& x2) {
  const auto e1 = model.twin(SiameseModel::Twin::left).forward(x1);
  const auto e2 = model.twin(SiameseModel::Twin::right).forward(x2);
  return (e1 - e2).norm();
}

}  // namespace oneshot
