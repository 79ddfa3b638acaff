#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "oneshot/dataset.hpp"
#include "oneshot/metrics.hpp"
#include "oneshot/network.hpp"
#include "oneshot/split.hpp"

namespace oneshot {

struct VoteConfig {
  std::size_t votes = 5;  // j
  std::uint64_t seed = 0;
};

inline const std::vector<std::size_t> kDefaultVoteSweep{1, 5, 10, 15, 20, 25, 30};

/// Embeddings of every dataset row under a fixed model.
FeatureMatrix embed_rows(const SiameseModel& model, const FeatureMatrix& features);

/// N-way nearest-reference classification with majority voting.
///
/// Each of `votes` rounds draws one reference per class (retained classes
/// from their testing pool, the excluded class from its labelled pool) and
/// votes for the class at the smallest distance. The most-voted class wins;
/// ties go to the smaller cumulative distance, then the lower class index.
/// `embeddings` must hold the embedding of every row of the dataset.
ClassIndex classify_embedding(const FeatureMatrix& embeddings, const Eigen::RowVectorXd& query,
                              const ExperimentSplit& split, std::size_t votes, Rng& rng);

/// Same rule, computing every distance through the twin network directly.
ClassIndex classify_instance(const SiameseModel& model, const EncodedDataset& ds,
                             const Eigen::VectorXd& x, const ExperimentSplit& split,
                             std::size_t votes, Rng& rng);

/// Predicts the class of dataset row `row`.
using InstanceClassifier = std::function<ClassIndex(std::size_t row, Rng& rng)>;

/// floor(test_batch_size / N) instances per class, drawn with replacement from
/// each class's evaluation pool (testing pool, or the excluded class's
/// unlabelled pool). Instance i of class c uses its own derived random stream,
/// so results do not depend on evaluation order.
ConfusionMatrix evaluate(const ExperimentSplit& split, const std::vector<std::string>& class_names,
                         std::size_t test_batch_size, std::uint64_t seed,
                         const InstanceClassifier& classify);

ConfusionMatrix evaluate(const SiameseModel& model, const EncodedDataset& ds,
                         const ExperimentSplit& split, std::size_t test_batch_size,
                         const VoteConfig& vote);

struct SweepRow {
  std::size_t votes = 0;
  ConfusionMatrix cm;
  MetricsReport metrics;
};

/// One evaluation per vote count, all with the same seed.
std::vector<SweepRow> vote_sweep(const SiameseModel& model, const EncodedDataset& ds,
                                 const ExperimentSplit& split, std::size_t test_batch_size,
                                 const std::vector<std::size_t>& vote_counts, std::uint64_t seed);

}  // namespace oneshot
