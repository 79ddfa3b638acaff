#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string_view>

#include "oneshot/dataset.hpp"

namespace oneshot {

/// Where the cluster centres sit. Adjacent centres are always `separation`
/// standard deviations apart.
///   axes: one scaled unit axis per class, so every pair is equidistant.
///   ring: a regular polygon in the plane of the first two features.
///   line: evenly spaced along the first feature.
enum class ClusterLayout { axes, ring, line };

std::string_view to_string(ClusterLayout layout);
ClusterLayout parse_cluster_layout(std::string_view text);

/// Isotropic Gaussian clusters. Class 0 is "normal", the rest
/// "attack1".."attackK".
struct GaussianClusterSpec {
  std::size_t num_classes = 5;
  std::size_t per_class = 500;
  std::size_t features = 20;
  double separation = 4.0;  // in units of sigma
  double sigma = 1.0;
  ClusterLayout layout = ClusterLayout::axes;
  std::uint64_t seed = 7;
};

RawDataset make_gaussian_clusters(const GaussianClusterSpec& spec);

/// Writes a numeric-only dataset as CSV with a header row.
void write_numeric_csv(std::ostream& out, const RawDataset& ds);

}  // namespace oneshot
