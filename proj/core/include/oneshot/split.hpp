#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "oneshot/dataset.hpp"
#include "oneshot/rng.hpp"

namespace oneshot {

using IndexList = std::vector<std::size_t>;

/// Leave-one-class-out partition of a dataset.
///
/// Every retained class is halved into a training pool (pair generation) and
/// a testing pool (evaluation instances and references). The excluded class is
/// halved into a labelled pool (references) and an unlabelled pool (instances
/// to classify). Pools are indexed by class; the excluded class has empty
/// training/testing pools. Odd counts give the extra instance to the first
/// half (training or labelled).
struct ExperimentSplit {
  std::size_t num_classes = 0;
  ClassIndex normal_class = 0;
  ClassIndex excluded_class = 0;
  std::vector<ClassIndex> training_classes;  // the K retained classes, ascending
  std::vector<IndexList> training_pools;
  std::vector<IndexList> testing_pools;
  IndexList excluded_labelled;
  IndexList excluded_unlabelled;

  /// Pool that supplies comparison references for class c.
  const IndexList& reference_pool(ClassIndex c) const {
    return c == excluded_class ? excluded_labelled : testing_pools[c];
  }
  /// Pool that supplies instances to classify for class c.
  const IndexList& evaluation_pool(ClassIndex c) const {
    return c == excluded_class ? excluded_unlabelled : testing_pools[c];
  }
  /// Union of the training pools, sorted ascending.
  IndexList training_rows() const;
};

ExperimentSplit make_split(std::span<const ClassIndex> labels, std::size_t num_classes,
                           ClassIndex normal_class, ClassIndex excluded_class, Rng& rng,
                           std::span<const std::string> class_names = {});
ExperimentSplit make_split(const EncodedDataset& ds, ClassIndex excluded_class, Rng& rng);
ExperimentSplit make_split(const RawDataset& ds, ClassIndex excluded_class, Rng& rng);

}  // namespace oneshot
