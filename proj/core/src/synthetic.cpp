#include "oneshot/synthetic.hpp"

#include <cmath>
#include <ostream>
#include <vector>

#include <fmt/format.h>

#include "oneshot/error.hpp"
#include "oneshot/rng.hpp"

namespace oneshot {

namespace {

std::vector<std::vector<double>> cluster_centres(const GaussianClusterSpec& spec) {
  const std::size_t k = spec.num_classes;
  const double step = spec.separation * spec.sigma;
  std::vector<std::vector<double>> centres(k, std::vector<double>(spec.features, 0.0));
  switch (spec.layout) {
    case ClusterLayout::axes:
      // a * e_c with a = step / sqrt(2)
      for (std::size_t c = 0; c < k; ++c) centres[c][c] = step / std::sqrt(2.0);
      break;
    case ClusterLayout::ring: {
      const double pi = std::acos(-1.0);
      const double radius = step / (2.0 * std::sin(pi / static_cast<double>(k)));
      for (std::size_t c = 0; c < k; ++c) {
        const double angle = 2.0 * pi * static_cast<double>(c) / static_cast<double>(k);
        centres[c][0] = radius * std::cos(angle);
        centres[c][1] = radius * std::sin(angle);
      }
      break;
    }
    case ClusterLayout::line:
      for (std::size_t c = 0; c < k; ++c) centres[c][0] = step * static_cast<double>(c);
      break;
  }
  return centres;
}

}  // namespace

std::string_view to_string(ClusterLayout layout) {
  switch (layout) {
    case ClusterLayout::axes: return "axes";
    case ClusterLayout::ring: return "ring";
    case ClusterLayout::line: return "line";
  }
  return "axes";
}

ClusterLayout parse_cluster_layout(std::string_view text) {
  if (text == "axes") return ClusterLayout::axes;
  if (text == "ring") return ClusterLayout::ring;
  if (text == "line") return ClusterLayout::line;
  throw ConfigError(fmt::format("unknown cluster layout '{}'", text));
}

RawDataset make_gaussian_clusters(const GaussianClusterSpec& spec) {
  if (spec.num_classes < 2 || spec.per_class == 0) {
    throw ConfigError("need at least two classes with one instance each");
  }
  if (spec.layout == ClusterLayout::axes && spec.features < spec.num_classes) {
    throw ConfigError("the axes layout needs at least one feature per class");
  }
  if (spec.layout == ClusterLayout::ring && spec.features < 2) {
    throw ConfigError("the ring layout needs at least two features");
  }
  if (!(spec.sigma > 0.0)) throw ConfigError("sigma must be positive");

  RawDataset ds;
  ds.schema = Schema::all_numeric(spec.features, "normal");
  for (std::size_t f = 0; f < spec.features; ++f) {
    ds.features.push_back({ds.schema.columns[f].name, ColumnKind::numeric, f});
  }
  ds.numeric_width = spec.features;
  ds.class_names.push_back("normal");
  for (std::size_t c = 1; c < spec.num_classes; ++c) {
    ds.class_names.push_back(fmt::format("attack{}", c));
  }
  ds.normal_class = 0;

  const auto centres = cluster_centres(spec);
  Rng rng(spec.seed);
  std::normal_distribution<double> noise(0.0, spec.sigma);
  const std::size_t rows = spec.num_classes * spec.per_class;
  ds.numeric.reserve(rows * spec.features);
  ds.labels.reserve(rows);
  for (std::size_t i = 0; i < spec.per_class; ++i) {
    for (std::size_t c = 0; c < spec.num_classes; ++c) {
      for (std::size_t f = 0; f < spec.features; ++f) {
        ds.numeric.push_back(centres[c][f] + noise(rng));
      }
      ds.labels.push_back(c);
    }
  }
  return ds;
}

void write_numeric_csv(std::ostream& out, const RawDataset& ds) {
  if (!ds.categorical.empty()) throw ConfigError("dataset has categorical columns");
  for (const auto& f : ds.features) out << f.name << ',';
  out << "label\n";
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (std::size_t f = 0; f < ds.numeric_width; ++f) {
      out << fmt::format("{:.17g}", ds.numeric_cell(r, f)) << ',';
    }
    out << ds.class_names[ds.labels[r]] << '\n';
  }
}

}  // namespace oneshot
