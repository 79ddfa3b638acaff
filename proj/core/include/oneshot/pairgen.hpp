#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "oneshot/split.hpp"

namespace oneshot {

enum class PairTarget : std::uint8_t { dissimilar = 0, similar = 1 };

struct InstancePair {
  std::size_t left = 0;
  std::size_t right = 0;
  ClassIndex left_class = 0;
  ClassIndex right_class = 0;
  PairTarget target = PairTarget::dissimilar;
};

/// Training pairs. Rows reference the dataset the split was built from.
struct PairBatch {
  std::vector<InstancePair> pairs;

  std::size_t size() const noexcept { return pairs.size(); }
  bool empty() const noexcept { return pairs.empty(); }
};

/// Builds a batch of unique pairs from the split's training pools.
///
/// floor(B/2) similar pairs are spread evenly over the K training classes and
/// ceil(B/2) dissimilar pairs evenly over the K(K-1)/2 class combinations.
/// Remainders go one each to the lowest-indexed buckets. A bucket whose quota
/// exceeds its number of unique pairs is exhausted and the shortfall is
/// handed round-robin to the remaining buckets of the same kind. Throws
/// PairQuotaError when the pools cannot supply B unique pairs in total.
PairBatch generate_training_batch(const ExperimentSplit& split, std::size_t batch_size, Rng& rng);

/// Splits `total` over buckets with the given capacities: an even share,
/// remainder to the lowest indices, overflow redistributed round-robin.
/// Throws PairQuotaError when sum(capacity) < total.
std::vector<std::size_t> plan_quotas(std::size_t total, const std::vector<std::size_t>& capacity);

struct PairCounts {
  std::map<ClassIndex, std::size_t> similar_per_class;
  std::map<std::pair<ClassIndex, ClassIndex>, std::size_t> dissimilar_per_combination;
  std::size_t similar = 0;
  std::size_t dissimilar = 0;

  std::size_t total() const noexcept { return similar + dissimilar; }
};

PairCounts pair_counts(const PairBatch& batch);

/// One `left_idx,right_idx,target` line per pair (target 1 = similar).
void write_batch(std::ostream& out, const PairBatch& batch);

}  // namespace oneshot
