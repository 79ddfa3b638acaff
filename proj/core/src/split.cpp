#include "oneshot/split.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "oneshot/error.hpp"

namespace oneshot {

IndexList ExperimentSplit::training_rows() const {
  IndexList rows;
  for (const auto& pool : training_pools) rows.insert(rows.end(), pool.begin(), pool.end());
  std::sort(rows.begin(), rows.end());
  return rows;
}

ExperimentSplit make_split(std::span<const ClassIndex> labels, std::size_t num_classes,
                           ClassIndex normal_class, ClassIndex excluded_class, Rng& rng,
                           std::span<const std::string> class_names) {
  const auto name = [&](ClassIndex c) {
    return c < class_names.size() ? fmt::format("'{}'", class_names[c]) : fmt::format("{}", c);
  };
  if (excluded_class >= num_classes) {
    throw ConfigError(fmt::format("excluded class {} out of range", excluded_class));
  }
  if (excluded_class == normal_class) throw ConfigError("cannot exclude benign class");

  std::vector<IndexList> members(num_classes);
  for (std::size_t row = 0; row < labels.size(); ++row) {
    if (labels[row] >= num_classes) throw ConfigError("label index out of range");
    members[labels[row]].push_back(row);
  }
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (members[c].size() < 2) {
      throw ConfigError(fmt::format("class {} has {} instance(s); at least 2 are required", name(c),
                                    members[c].size()));
    }
  }

  ExperimentSplit split;
  split.num_classes = num_classes;
  split.normal_class = normal_class;
  split.excluded_class = excluded_class;
  split.training_pools.resize(num_classes);
  split.testing_pools.resize(num_classes);

  for (std::size_t c = 0; c < num_classes; ++c) {
    auto& pool = members[c];
    std::shuffle(pool.begin(), pool.end(), rng);
    const auto first_half = static_cast<std::ptrdiff_t>((pool.size() + 1) / 2);
    IndexList head(pool.begin(), pool.begin() + first_half);
    IndexList tail(pool.begin() + first_half, pool.end());
    if (c == excluded_class) {
      split.excluded_labelled = std::move(head);
      split.excluded_unlabelled = std::move(tail);
    } else {
      split.training_classes.push_back(c);
      split.training_pools[c] = std::move(head);
      split.testing_pools[c] = std::move(tail);
    }
  }
  return split;
}

ExperimentSplit make_split(const EncodedDataset& ds, ClassIndex excluded_class, Rng& rng) {
  return make_split(ds.labels, ds.num_classes(), ds.normal_class, excluded_class, rng,
                    ds.class_names);
}

ExperimentSplit make_split(const RawDataset& ds, ClassIndex excluded_class, Rng& rng) {
  return make_split(ds.labels, ds.num_classes(), ds.normal_class, excluded_class, rng,
                    ds.class_names);
}

}  // namespace oneshot
