#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "oneshot/dataset.hpp"
#include "oneshot/rng.hpp"

namespace oneshot {

enum class Activation { linear, relu, tanh, sigmoid };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view text);

/// Dense layer y = W^T x + b with W stored as (inputs x outputs).
struct LayerParameters {
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;
};

/// Per-layer parameter (or gradient, or velocity) tensors.
using ParameterSet = std::vector<LayerParameters>;

ParameterSet zeros_like(const ParameterSet& params);

/// Feed-forward embedding network: hidden layers apply `hidden_activation`,
/// the output layer is linear.
class EmbeddingNetwork {
 public:
  EmbeddingNetwork() = default;
  EmbeddingNetwork(std::vector<std::size_t> layer_sizes, Activation hidden_activation);

  const std::vector<std::size_t>& layer_sizes() const noexcept { return layer_sizes_; }
  std::size_t input_width() const noexcept { return layer_sizes_.front(); }
  std::size_t embedding_width() const noexcept { return layer_sizes_.back(); }
  std::size_t num_layers() const noexcept { return params_.size(); }
  Activation hidden_activation() const noexcept { return hidden_activation_; }

  const ParameterSet& parameters() const noexcept { return params_; }
  ParameterSet& parameters() noexcept { return params_; }

  /// Embeds every row of `rows`; result has one embedding per row.
  FeatureMatrix forward(const FeatureMatrix& rows) const;
  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;

 private:
  std::vector<std::size_t> layer_sizes_;
  Activation hidden_activation_ = Activation::relu;
  ParameterSet params_;
};

/// Twin network. Both twins are the same EmbeddingNetwork object, so their
/// weights cannot diverge.
class SiameseModel {
 public:
  enum class Twin { left, right };

  SiameseModel() = default;
  SiameseModel(std::vector<std::size_t> layer_sizes, Activation hidden_activation);

  const EmbeddingNetwork& twin(Twin) const noexcept { return network_; }
  const EmbeddingNetwork& network() const noexcept { return network_; }
  EmbeddingNetwork& network() noexcept { return network_; }

  const std::vector<std::size_t>& layer_sizes() const noexcept { return network_.layer_sizes(); }
  std::size_t input_width() const noexcept { return network_.input_width(); }
  std::size_t embedding_width() const noexcept { return network_.embedding_width(); }
  Activation hidden_activation() const noexcept { return network_.hidden_activation(); }
  const ParameterSet& parameters() const noexcept { return network_.parameters(); }
  ParameterSet& parameters() noexcept { return network_.parameters(); }

  /// Sum of squared weights (biases excluded).
  double weight_norm_squared() const;
  bool all_finite() const;

 private:
  EmbeddingNetwork network_;
};

/// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
SiameseModel init_model(const std::vector<std::size_t>& layer_sizes, Activation hidden_activation,
                        Rng& rng);

Eigen::VectorXd embed(const SiameseModel& model, const Eigen::VectorXd& x);

/// Euclidean distance between the twin embeddings of x1 and x2.
double distance(const SiameseModel& model, const Eigen::VectorXd& x1, const Eigen::VectorXd& x2);

/// Exact round-trip text checkpoint (hexadecimal floating point).
void write_checkpoint(std::ostream& out, const SiameseModel& model);
SiameseModel read_checkpoint(std::istream& in);
void save_checkpoint(const std::filesystem::path& path, const SiameseModel& model);
SiameseModel load_checkpoint(const std::filesystem::path& path);

}  // namespace oneshot
