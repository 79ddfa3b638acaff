#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oneshot/dataset.hpp"
#include "oneshot/network.hpp"
#include "oneshot/rng.hpp"
#include "oneshot/split.hpp"

namespace oneshot::testing {

inline std::filesystem::path source_dir() { return ONESHOT_SOURCE_DIR; }
inline std::filesystem::path data_dir() { return ONESHOT_TEST_DATA_DIR; }

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("oneshot_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Straight-line forward pass written with plain loops, independent of the
/// Eigen code path in the library.
inline std::vector<double> forward_oracle(const SiameseModel& model, const std::vector<double>& x) {
  std::vector<double> a = x;
  const auto& params = model.parameters();
  for (std::size_t l = 0; l < params.size(); ++l) {
    const auto& w = params[l].weights;
    const auto& b = params[l].bias;
    std::vector<double> z(static_cast<std::size_t>(w.cols()), 0.0);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      double s = b(j);
      for (Eigen::Index i = 0; i < w.rows(); ++i) s += a[static_cast<std::size_t>(i)] * w(i, j);
      z[static_cast<std::size_t>(j)] = s;
    }
    if (l + 1 < params.size()) {
      for (auto& v : z) {
        switch (model.hidden_activation()) {
          case Activation::relu: v = v > 0.0 ? v : 0.0; break;
          case Activation::tanh: v = std::tanh(v); break;
          case Activation::sigmoid: v = 1.0 / (1.0 + std::exp(-v)); break;
          case Activation::linear: break;
        }
      }
    }
    a = std::move(z);
  }
  return a;
}

inline double oracle_distance(const SiameseModel& model, const std::vector<double>& x1,
                              const std::vector<double>& x2) {
  const auto a = forward_oracle(model, x1);
  const auto b = forward_oracle(model, x2);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline std::vector<double> row_vector(const FeatureMatrix& m, Eigen::Index r) {
  return std::vector<double>(m.row(r).data(), m.row(r).data() + m.cols());
}

/// Labels for a dataset with the given per-class counts, rows interleaved.
inline std::vector<ClassIndex> labels_with_counts(const std::vector<std::size_t>& counts,
                                                  Rng& rng) {
  std::vector<ClassIndex> labels;
  for (std::size_t c = 0; c < counts.size(); ++c) labels.insert(labels.end(), counts[c], c);
  std::shuffle(labels.begin(), labels.end(), rng);
  return labels;
}

/// Uniform random features in [0,1] with the given labels.
inline EncodedDataset random_encoded(const std::vector<ClassIndex>& labels, std::size_t width,
                                     std::size_t num_classes, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FeatureMatrix x(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(width));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) = u(rng);
  }
  std::vector<std::string> names{"normal"};
  for (std::size_t c = 1; c < num_classes; ++c) names.push_back("attack" + std::to_string(c));
  return make_encoded(std::move(x), labels, std::move(names), 0);
}

}  // namespace oneshot::testing
