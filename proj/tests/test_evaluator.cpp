#include <limits>
#include <map>
#include <numeric>

#include <gtest/gtest.h>

#include "oneshot/error.hpp"
#include "oneshot/evaluator.hpp"
#include "oneshot/synthetic.hpp"
#include "oneshot/trainer.hpp"
#include "test_support.hpp"

namespace oneshot {
namespace {

/// One-dimensional embeddings: row r sits at `positions[r]`, the query at 0,
/// so the distance to a reference is its position.
struct LineFixture {
  FeatureMatrix embeddings;
  ExperimentSplit split;
};

LineFixture line_fixture(const std::vector<std::vector<double>>& pools, ClassIndex excluded) {
  LineFixture f;
  std::size_t rows = 0;
  for (const auto& p : pools) rows += p.size();
  f.embeddings.resize(static_cast<Eigen::Index>(rows), 1);
  f.split.num_classes = pools.size();
  f.split.excluded_class = excluded;
  f.split.training_pools.resize(pools.size());
  f.split.testing_pools.resize(pools.size());
  std::size_t row = 0;
  for (std::size_t c = 0; c < pools.size(); ++c) {
    if (c != excluded) f.split.training_classes.push_back(c);
    for (double d : pools[c]) {
      f.embeddings(static_cast<Eigen::Index>(row), 0) = d;
      (c == excluded ? f.split.excluded_labelled : f.split.testing_pools[c]).push_back(row);
      ++row;
    }
  }
  return f;
}

/// The voting rule written out directly over per-class candidate distances.
ClassIndex oracle_vote(const std::vector<std::vector<double>>& pools, std::size_t votes,
                       Rng& rng) {
  const std::size_t n = pools.size();
  std::vector<std::size_t> tally(n, 0);
  std::vector<double> cumulative(n, 0.0);
  for (std::size_t round = 0; round < votes; ++round) {
    std::vector<double> d(n);
    for (std::size_t c = 0; c < n; ++c) {
      d[c] = pools[c][uniform_index(rng, pools[c].size())];
      cumulative[c] += d[c];
    }
    const auto best = std::min_element(d.begin(), d.end()) - d.begin();
    ++tally[static_cast<std::size_t>(best)];
  }
  ClassIndex winner = 0;
  for (std::size_t c = 0; c < n; ++c) {
    const bool more = tally[c] > tally[winner];
    const bool tie_closer = tally[c] == tally[winner] && cumulative[c] < cumulative[winner];
    if (more || tie_closer) winner = c;
  }
  return winner;
}

Eigen::RowVectorXd origin() { return Eigen::RowVectorXd::Zero(1); }

TEST(ClassifyEmbedding, SingleVotePicksNearestReference) {
  const auto f = line_fixture({{3.0}, {1.0}, {2.0}}, 2);
  Rng rng(1);
  EXPECT_EQ(classify_embedding(f.embeddings, origin(), f.split, 1, rng), 1u);
}

TEST(ClassifyEmbedding, EqualDistanceGoesToLowerIndex) {
  const auto f = line_fixture({{2.0}, {1.0}, {1.0}}, 1);
  for (std::size_t votes : {1, 4, 7}) {
    Rng rng(votes);
    EXPECT_EQ(classify_embedding(f.embeddings, origin(), f.split, votes, rng), 1u);
  }
}

TEST(ClassifyEmbedding, TallyTieGoesToSmallerCumulativeDistance) {
  // Class 0 wins a round only with its 0.5 reference; class 1 always sits at 1.
  const std::vector<std::vector<double>> pools{{0.5, 5.0}, {1.0}, {10.0}};
  const auto f = line_fixture(pools, 2);
  std::size_t tally_ties = 0;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    Rng probe(seed);
    const bool first = uniform_index(probe, 2) == 0;
    uniform_index(probe, 1);
    uniform_index(probe, 1);
    const bool second = uniform_index(probe, 2) == 0;
    if (first == second) continue;
    ++tally_ties;
    Rng rng(seed);
    EXPECT_EQ(classify_embedding(f.embeddings, origin(), f.split, 2, rng), 1u) << seed;
  }
  EXPECT_GT(tally_ties, 0u);
}

TEST(ClassifyEmbedding, FullTieGoesToLowerIndex) {
  const std::vector<std::vector<double>> pools{{0.5, 5.0}, {5.0, 0.5}, {10.0}};
  const auto f = line_fixture(pools, 2);
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    Rng a(seed);
    Rng b(seed);
    EXPECT_EQ(classify_embedding(f.embeddings, origin(), f.split, 2, a), oracle_vote(pools, 2, b));
  }
}

TEST(ClassifyEmbedding, MatchesOracleOnRandomPools) {
  Rng gen(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + uniform_index(gen, 4);
    std::vector<std::vector<double>> pools(n);
    for (auto& p : pools) {
      p.resize(1 + uniform_index(gen, 5));
      // Coarse values make ties common.
      for (auto& d : p) d = static_cast<double>(uniform_index(gen, 4));
    }
    const auto f = line_fixture(pools, 1 + uniform_index(gen, n - 1));
    const std::size_t votes = 1 + uniform_index(gen, 8);
    const std::uint64_t seed = gen();
    Rng a(seed);
    Rng b(seed);
    EXPECT_EQ(classify_embedding(f.embeddings, origin(), f.split, votes, a),
              oracle_vote(pools, votes, b));
  }
}

TEST(ClassifyEmbedding, RejectsZeroVotesAndEmptyPools) {
  auto f = line_fixture({{1.0}, {1.0}, {1.0}}, 2);
  Rng rng(1);
  EXPECT_THROW(classify_embedding(f.embeddings, origin(), f.split, 0, rng), ConfigError);
  f.split.excluded_labelled.clear();
  EXPECT_THROW(classify_embedding(f.embeddings, origin(), f.split, 1, rng), ConfigError);
}

struct TrainedFixture {
  EncodedDataset ds;
  SiameseModel model;
  ExperimentSplit split;
};

TrainedFixture random_fixture(std::uint64_t seed) {
  TrainedFixture f;
  Rng rng(seed);
  const auto labels = testing::labels_with_counts({30, 30, 30, 30}, rng);
  f.ds = testing::random_encoded(labels, 5, 4, rng);
  f.model = init_model({5, 7, 3}, Activation::relu, rng);
  f.split = make_split(f.ds, 2, rng);
  return f;
}

TEST(ClassifyInstance, AgreesWithPrecomputedEmbeddings) {
  const auto f = random_fixture(3);
  const auto embeddings = embed_rows(f.model, f.ds.features);
  for (std::size_t row = 0; row < f.ds.size(); row += 7) {
    for (std::size_t votes : {1, 5}) {
      Rng a(row * 31 + votes);
      Rng b(row * 31 + votes);
      const Eigen::VectorXd x = f.ds.features.row(static_cast<Eigen::Index>(row)).transpose();
      EXPECT_EQ(classify_instance(f.model, f.ds, x, f.split, votes, a),
                classify_embedding(embeddings, embeddings.row(static_cast<Eigen::Index>(row)),
                                   f.split, votes, b));
    }
  }
}

TEST(EmbedRows, MatchesPerRowEmbedAcrossChunks) {
  Rng rng(4);
  const auto model = init_model({3, 5, 2}, Activation::tanh, rng);
  FeatureMatrix x = FeatureMatrix::Random(5000, 3);
  const auto e = embed_rows(model, x);
  ASSERT_EQ(e.rows(), 5000);
  for (Eigen::Index r : {0, 4095, 4096, 4999}) {
    const Eigen::VectorXd expected = embed(model, x.row(r).transpose());
    EXPECT_LT((e.row(r).transpose() - expected).norm(), 1e-12);
  }
}

TEST(Evaluate, DrawsFloorOfBatchOverClassesPerClass) {
  const auto f = random_fixture(5);
  const auto cm = evaluate(f.split, f.ds.class_names, 103, 9,
                           [](std::size_t, Rng& rng) { return uniform_index(rng, 4); });
  for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(cm.row_total(c), 25u);
  EXPECT_EQ(cm.total(), 100u);
}

TEST(Evaluate, InstancesComeFromEvaluationPools) {
  const auto f = random_fixture(6);
  std::map<ClassIndex, std::vector<std::size_t>> seen;
  evaluate(f.split, f.ds.class_names, 400, 2, [&](std::size_t row, Rng&) {
    const auto c = f.ds.labels[row];
    seen[c].push_back(row);
    return c;
  });
  for (const auto& [c, rows] : seen) {
    const auto& pool = f.split.evaluation_pool(c);
    for (auto r : rows) EXPECT_NE(std::find(pool.begin(), pool.end(), r), pool.end());
  }
  const auto& labelled = f.split.excluded_labelled;
  for (auto r : seen[2]) {
    EXPECT_EQ(std::find(labelled.begin(), labelled.end(), r), labelled.end());
  }
  EXPECT_EQ(seen.size(), 4u);
}

TEST(Evaluate, InstanceStreamsDoNotDependOnBatchSize) {
  const auto f = random_fixture(7);
  const auto record = [&](std::size_t batch) {
    std::vector<std::pair<std::size_t, std::size_t>> calls;
    evaluate(f.split, f.ds.class_names, batch, 13, [&](std::size_t row, Rng& rng) {
      calls.emplace_back(row, uniform_index(rng, 1000));
      return ClassIndex{0};
    });
    return calls;
  };
  const auto small = record(40);
  const auto large = record(80);
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(small[c * 10 + i], large[c * 20 + i]);
  }
}

TEST(Evaluate, RejectsInconsistentInputs) {
  const auto f = random_fixture(8);
  const auto any = [](std::size_t, Rng&) { return ClassIndex{0}; };
  EXPECT_THROW(evaluate(f.split, {"a", "b"}, 100, 1, any), ConfigError);
  EXPECT_THROW(evaluate(f.split, f.ds.class_names, 3, 1, any), ConfigError);
  EXPECT_THROW(evaluate(f.split, f.ds.class_names, 100, 1,
                        [](std::size_t, Rng&) { return ClassIndex{9}; }),
               ConfigError);
  auto broken = f.split;
  broken.excluded_unlabelled.clear();
  EXPECT_THROW(evaluate(broken, f.ds.class_names, 100, 1, any), ConfigError);
}

TEST(Evaluate, IsDeterministicAndSeedSensitive) {
  const auto f = random_fixture(9);
  const auto a = evaluate(f.model, f.ds, f.split, 400, {5, 77});
  const auto b = evaluate(f.model, f.ds, f.split, 400, {5, 77});
  const auto c = evaluate(f.model, f.ds, f.split, 400, {5, 78});
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(Evaluate, EmbeddingScaleDoesNotChangePredictions) {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    auto f = random_fixture(seed);
    const auto before = evaluate(f.model, f.ds, f.split, 400, {5, seed});
    f.model.parameters().back().weights *= 3.7;
    EXPECT_EQ(evaluate(f.model, f.ds, f.split, 400, {5, seed}), before);
  }
}

TEST(Evaluate, SeparatedClustersAreClassifiedPerfectly) {
  GaussianClusterSpec spec;
  spec.num_classes = 4;
  spec.per_class = 40;
  spec.features = 4;
  spec.separation = 40.0;
  const auto raw = make_gaussian_clusters(spec);
  std::vector<std::size_t> rows(raw.size());
  std::iota(rows.begin(), rows.end(), 0);
  const auto ds = encode(raw, fit_encoder(raw, rows));
  SiameseModel model({4, 4}, Activation::linear);
  model.parameters()[0].weights = Eigen::MatrixXd::Identity(4, 4);
  Rng rng(3);
  const auto split = make_split(ds, 3, rng);
  for (std::size_t votes : {1, 5}) {
    const auto cm = evaluate(model, ds, split, 400, {votes, 1});
    EXPECT_EQ(cm.diagonal_total(), cm.total()) << votes << " votes";
  }
}

TEST(VoteSweep, EachRowEqualsAStandaloneEvaluation) {
  const auto f = random_fixture(16);
  const auto sweep = vote_sweep(f.model, f.ds, f.split, 200, {1, 5, 10}, 4);
  ASSERT_EQ(sweep.size(), 3u);
  for (const auto& row : sweep) {
    EXPECT_EQ(row.cm, evaluate(f.model, f.ds, f.split, 200, {row.votes, 4}));
    EXPECT_EQ(row.metrics.excluded_class, ClassIndex{2});
  }
  EXPECT_THROW(vote_sweep(f.model, f.ds, f.split, 200, {}, 4), ConfigError);
}

}  // namespace
}  // namespace oneshot
