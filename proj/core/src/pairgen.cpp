#include "oneshot/pairgen.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>

#include "oneshot/error.hpp"

namespace oneshot {
namespace {

std::uint64_t pair_key(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

// One source of pairs: either within one pool (similar) or across two pools
// (dissimilar).
struct Bucket {
  const IndexList* first = nullptr;
  const IndexList* second = nullptr;  // null for within-pool pairs
  ClassIndex first_class = 0;
  ClassIndex second_class = 0;

  bool within() const { return second == nullptr; }

  std::size_t capacity() const {
    const std::size_t n = first->size();
    return within() ? n * (n - 1) / 2 : n * second->size();
  }

  std::vector<std::pair<std::size_t, std::size_t>> enumerate() const {
    std::vector<std::pair<std::size_t, std::size_t>> all;
    all.reserve(capacity());
    if (within()) {
      for (std::size_t i = 0; i < first->size(); ++i) {
        for (std::size_t j = i + 1; j < first->size(); ++j) {
          all.emplace_back((*first)[i], (*first)[j]);
        }
      }
    } else {
      for (auto a : *first) {
        for (auto b : *second) all.emplace_back(a, b);
      }
    }
    return all;
  }
};

void draw_bucket(const Bucket& bucket, std::size_t quota, PairTarget target, Rng& rng,
                 std::vector<InstancePair>& out) {
  if (quota == 0) return;
  const auto emit = [&](std::size_t a, std::size_t b) {
    out.push_back({a, b, bucket.first_class, bucket.within() ? bucket.first_class
                                                              : bucket.second_class,
                   target});
  };

  std::unordered_set<std::uint64_t> seen;
  const auto pick_from_unseen = [&](std::size_t needed) {
    auto all = bucket.enumerate();
    std::erase_if(all, [&](const auto& p) { return seen.contains(pair_key(p.first, p.second)); });
    for (std::size_t i = 0; i < needed; ++i) {
      const auto j = i + uniform_index(rng, all.size() - i);
      std::swap(all[i], all[j]);
      emit(all[i].first, all[i].second);
    }
  };

  // Dense quotas are cheaper (and guaranteed to terminate) by enumeration.
  if (2 * quota > bucket.capacity()) {
    pick_from_unseen(quota);
    return;
  }

  seen.reserve(quota * 2);
  const std::size_t max_failures = 100 * quota;
  std::size_t failures = 0;
  std::size_t drawn = 0;
  const IndexList& a_pool = *bucket.first;
  const IndexList& b_pool = bucket.within() ? *bucket.first : *bucket.second;
  while (drawn < quota) {
    const std::size_t a = a_pool[uniform_index(rng, a_pool.size())];
    const std::size_t b = b_pool[uniform_index(rng, b_pool.size())];
    if (a == b || !seen.insert(pair_key(a, b)).second) {
      if (++failures > max_failures) break;
      continue;
    }
    emit(a, b);
    ++drawn;
  }
  if (drawn < quota) pick_from_unseen(quota - drawn);
}

}  // namespace

std::vector<std::size_t> plan_quotas(std::size_t total, const std::vector<std::size_t>& capacity) {
  const std::size_t k = capacity.size();
  std::size_t available = 0;
  for (auto c : capacity) available += c;
  if (k == 0 || available < total) {
    throw PairQuotaError(
        fmt::format("only {} unique pairs available for a quota of {}", available, total),
        available);
  }

  std::vector<std::size_t> quota(k, total / k);
  for (std::size_t i = 0; i < total % k; ++i) ++quota[i];

  std::size_t excess = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (quota[i] > capacity[i]) {
      excess += quota[i] - capacity[i];
      quota[i] = capacity[i];
    }
  }
  while (excess > 0) {
    for (std::size_t i = 0; i < k && excess > 0; ++i) {
      if (quota[i] < capacity[i]) {
        ++quota[i];
        --excess;
      }
    }
  }
  return quota;
}

PairBatch generate_training_batch(const ExperimentSplit& split, std::size_t batch_size,
                                  Rng& rng) {
  const auto& classes = split.training_classes;
  const std::size_t k = classes.size();
  if (k < 2) throw ConfigError("pair generation needs at least 2 training classes");
  if (batch_size < 2 * k) {
    throw ConfigError(
        fmt::format("batch size {} is below the minimum of {} for {} classes", batch_size,
                    2 * k, k));
  }
  for (auto c : classes) {
    if (split.training_pools[c].size() > 0xffffffffu) {
      throw ConfigError("training pool too large");
    }
  }

  std::vector<Bucket> similar_buckets;
  for (auto c : classes) similar_buckets.push_back({&split.training_pools[c], nullptr, c, c});
  std::vector<Bucket> dissimilar_buckets;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      dissimilar_buckets.push_back({&split.training_pools[classes[i]],
                                    &split.training_pools[classes[j]], classes[i],
                                    classes[j]});
    }
  }

  const auto capacities = [](const std::vector<Bucket>& buckets) {
    std::vector<std::size_t> caps;
    for (const auto& b : buckets) caps.push_back(b.capacity());
    return caps;
  };
  const auto similar_caps = capacities(similar_buckets);
  const auto dissimilar_caps = capacities(dissimilar_buckets);
  std::size_t similar_available = 0;
  std::size_t dissimilar_available = 0;
  for (auto c : similar_caps) similar_available += c;
  for (auto c : dissimilar_caps) dissimilar_available += c;

  const std::size_t num_similar = batch_size / 2;
  const std::size_t num_dissimilar = batch_size - num_similar;
  if (similar_available < num_similar || dissimilar_available < num_dissimilar) {
    const std::size_t achievable = dissimilar_available > similar_available
                                       ? 2 * similar_available + 1
                                       : 2 * dissimilar_available;
    throw PairQuotaError(
        fmt::format("batch size {} exceeds the unique pairs available ({} similar, {} "
                    "dissimilar); achievable maximum is {}",
                    batch_size, similar_available, dissimilar_available, achievable),
        achievable);
  }

  const auto similar_quota = plan_quotas(num_similar, similar_caps);
  const auto dissimilar_quota = plan_quotas(num_dissimilar, dissimilar_caps);

  PairBatch batch;
  batch.pairs.reserve(batch_size);
  for (std::size_t i = 0; i < similar_buckets.size(); ++i) {
    draw_bucket(similar_buckets[i], similar_quota[i], PairTarget::similar, rng, batch.pairs);
  }
  for (std::size_t i = 0; i < dissimilar_buckets.size(); ++i) {
    draw_bucket(dissimilar_buckets[i], dissimilar_quota[i], PairTarget::dissimilar, rng,
                batch.pairs);
  }
  std::shuffle(batch.pairs.begin(), batch.pairs.end(), rng);
  return batch;
}

PairCounts pair_counts(const PairBatch& batch) {
  PairCounts counts;
  for (const auto& p : batch.pairs) {
    if (p.target == PairTarget::similar) {
      ++counts.similar;
      ++counts.similar_per_class[p.left_class];
    } else {
      ++counts.dissimilar;
      const auto key = std::minmax(p.left_class, p.right_class);
      ++counts.dissimilar_per_combination[{key.first, key.second}];
    }
  }
  return counts;
}

void write_batch(std::ostream& out, const PairBatch& batch) {
  out << "left_idx,right_idx,target\n";
  for (const auto& p : batch.pairs) {
    out << p.left << ',' << p.right << ',' << (p.target == PairTarget::similar ? 1 : 0) << '\n';
  }
}

}  // namespace oneshot
