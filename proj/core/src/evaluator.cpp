#include "oneshot/evaluator.hpp"

#include <limits>

#include <fmt/format.h>

#include "oneshot/error.hpp"

namespace oneshot {
namespace {

void check_reference_pools(const ExperimentSplit& split) {
  for (std::size_t c = 0; c < split.num_classes; ++c) {
    if (split.reference_pool(c).empty()) {
      throw ConfigError(fmt::format("reference pool of class {} is empty", c));
    }
  }
}

// Votes over `votes` rounds; `dist(c, row)` is the distance from the query to
// reference `row` of class c.
template <typename Distance>
ClassIndex vote(const ExperimentSplit& split, std::size_t votes, Rng& rng, Distance&& dist) {
  if (votes == 0) throw ConfigError("vote count must be at least 1");
  check_reference_pools(split);
  const std::size_t n = split.num_classes;
  std::vector<std::size_t> tally(n, 0);
  std::vector<double> cumulative(n, 0.0);
  for (std::size_t round = 0; round < votes; ++round) {
    ClassIndex best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n; ++c) {
      const auto& pool = split.reference_pool(c);
      const double d = dist(c, pool[uniform_index(rng, pool.size())]);
      cumulative[c] += d;
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    ++tally[best];
  }
  ClassIndex winner = 0;
  for (std::size_t c = 1; c < n; ++c) {
    if (tally[c] > tally[winner] ||
        (tally[c] == tally[winner] && cumulative[c] < cumulative[winner])) {
      winner = c;
    }
  }
  return winner;
}

}  // namespace

FeatureMatrix embed_rows(const SiameseModel& model, const FeatureMatrix& features) {
  constexpr Eigen::Index kChunk = 4096;
  FeatureMatrix out(features.rows(), static_cast<Eigen::Index>(model.embedding_width()));
  for (Eigen::Index begin = 0; begin < features.rows(); begin += kChunk) {
    const auto count = std::min(kChunk, features.rows() - begin);
    out.middleRows(begin, count) = model.network().forward(FeatureMatrix(features.middleRows(begin, count)));
  }
  return out;
}

ClassIndex classify_embedding(const FeatureMatrix& embeddings, const Eigen::RowVectorXd& query,
                              const ExperimentSplit& split, std::size_t votes, Rng& rng) {
  return vote(split, votes, rng, [&](ClassIndex, std::size_t row) {
    return (embeddings.row(static_cast<Eigen::Index>(row)) - query).norm();
  });
}

ClassIndex classify_instance(const SiameseModel& model, const EncodedDataset& ds,
                             const Eigen::VectorXd& x, const ExperimentSplit& split,
                             std::size_t votes, Rng& rng) {
  return vote(split, votes, rng, [&](ClassIndex, std::size_t row) {
    return distance(model, x, ds.features.row(static_cast<Eigen::Index>(row)).transpose());
  });
}

ConfusionMatrix evaluate(const ExperimentSplit& split, const std::vector<std::string>& class_names,
                         std::size_t test_batch_size, std::uint64_t seed,
                         const InstanceClassifier& classify) {
  const std::size_t n = split.num_classes;
  if (class_names.size() != n) throw ConfigError("class name count does not match the split");
  const std::size_t per_class = test_batch_size / n;
  if (per_class == 0) {
    throw ConfigError(fmt::format("test batch size {} is smaller than the class count {}",
                                  test_batch_size, n));
  }
  ConfusionMatrix cm(class_names, split.normal_class);
  for (std::size_t c = 0; c < n; ++c) {
    const auto& pool = split.evaluation_pool(c);
    if (pool.empty()) {
      throw ConfigError(fmt::format("evaluation pool of class '{}' is empty", class_names[c]));
    }
    for (std::size_t i = 0; i < per_class; ++i) {
      Rng rng(derive_seed(seed, c, i));
      const std::size_t row = pool[uniform_index(rng, pool.size())];
      const ClassIndex predicted = classify(row, rng);
      if (predicted >= n) throw ConfigError("classifier returned an unknown class");
      cm.add(c, predicted);
    }
  }
  return cm;
}

ConfusionMatrix evaluate(const SiameseModel& model, const EncodedDataset& ds,
                         const ExperimentSplit& split, std::size_t test_batch_size,
                         const VoteConfig& vote_cfg) {
  const FeatureMatrix embeddings = embed_rows(model, ds.features);
  return evaluate(split, ds.class_names, test_batch_size, vote_cfg.seed,
                  [&](std::size_t row, Rng& rng) {
                    return classify_embedding(embeddings,
                                              embeddings.row(static_cast<Eigen::Index>(row)),
                                              split, vote_cfg.votes, rng);
                  });
}

std::vector<SweepRow> vote_sweep(const SiameseModel& model, const EncodedDataset& ds,
                                 const ExperimentSplit& split, std::size_t test_batch_size,
                                 const std::vector<std::size_t>& vote_counts, std::uint64_t seed) {
  if (vote_counts.empty()) throw ConfigError("vote sweep needs at least one vote count");
  const FeatureMatrix embeddings = embed_rows(model, ds.features);
  std::vector<SweepRow> rows;
  for (auto j : vote_counts) {
    auto cm = evaluate(split, ds.class_names, test_batch_size, seed,
                       [&](std::size_t row, Rng& rng) {
                         return classify_embedding(
                             embeddings, embeddings.row(static_cast<Eigen::Index>(row)), split, j,
                             rng);
                       });
    auto report = metrics(cm, split.excluded_class);
    rows.push_back({j, std::move(cm), std::move(report)});
  }
  return rows;
}

}  // namespace oneshot
