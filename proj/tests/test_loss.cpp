#include <gtest/gtest.h>

#include <cmath>

#include "oneshot/error.hpp"
#include "oneshot/loss.hpp"
#include "test_support.hpp"

namespace oneshot {
namespace {

TEST(ContrastiveLoss, Examples) {
  EXPECT_EQ(contrastive_loss(0.0, PairTarget::similar, 1.0), 0.0);
  EXPECT_EQ(contrastive_loss(1.5, PairTarget::dissimilar, 1.0), 0.0);
  EXPECT_NEAR(contrastive_loss(0.4, PairTarget::dissimilar, 1.0), 0.36, 1e-15);
  EXPECT_NEAR(contrastive_loss(0.4, PairTarget::similar, 1.0), 0.16, 1e-15);
}

TEST(ContrastiveLoss, NonnegativeAndZeroExactlyOnTheFlatSet) {
  Rng rng(6);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const double d = u(rng);
    const double m = 0.1 + u(rng);
    const double s = contrastive_loss(d, PairTarget::similar, m);
    const double x = contrastive_loss(d, PairTarget::dissimilar, m);
    EXPECT_GE(s, 0.0);
    EXPECT_GE(x, 0.0);
    EXPECT_EQ(s == 0.0, d == 0.0);
    EXPECT_EQ(x == 0.0, d >= m);
  }
}

TEST(LogLoss, PerfectPredictionIsNearZero) {
  EXPECT_NEAR(log_loss(1.0 - kProbabilityEpsilon, PairTarget::similar), 0.0, 1e-11);
  EXPECT_NEAR(log_loss(1.0, PairTarget::similar), 0.0, 1e-11);
  EXPECT_TRUE(std::isfinite(log_loss(1.0, PairTarget::dissimilar)));
  EXPECT_TRUE(std::isfinite(log_loss(0.0, PairTarget::similar)));
}

TEST(LogLoss, HalfSimilarityCostsLogTwo) {
  EXPECT_NEAR(log_loss(0.5, PairTarget::similar), std::log(2.0), 1e-15);
  EXPECT_NEAR(log_loss(0.5, PairTarget::dissimilar), std::log(2.0), 1e-15);
}

TEST(RegularizedLogLoss, PenaltyAddedOncePerBatch) {
  Rng rng(2);
  auto m = init_model({3, 2}, Activation::linear, rng);
  const std::vector<double> sims{0.5, 0.5, 0.5};
  const std::vector<PairTarget> targets{PairTarget::similar, PairTarget::dissimilar,
                                        PairTarget::similar};
  const double base = regularized_log_loss(sims, targets, 0.0, m);
  EXPECT_NEAR(base, 3.0 * std::log(2.0), 1e-14);
  const double lambda = 0.25;
  EXPECT_NEAR(regularized_log_loss(sims, targets, lambda, m),
              base + lambda * m.weight_norm_squared(), 1e-14);
  for (auto& p : m.parameters()) p.weights.setZero();
  EXPECT_EQ(l2_penalty(m, lambda), 0.0);
}

TEST(RegularizedLogLoss, BiasesAreNotPenalised) {
  SiameseModel m({2, 2}, Activation::linear);
  m.parameters()[0].weights.setZero();
  m.parameters()[0].bias.setConstant(5.0);
  EXPECT_EQ(m.weight_norm_squared(), 0.0);
}

TEST(SimilarityMap, ExpOfMinusDistance) {
  EXPECT_EQ(similarity_from_distance(0.0), 1.0);
  EXPECT_NEAR(similarity_from_distance(2.0), std::exp(-2.0), 1e-16);
  EXPECT_LT(similarity_from_distance(3.0), similarity_from_distance(2.0));
}

TEST(LossConfig, Validation) {
  LossConfig c;
  c.margin = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c.kind = LossKind::regularized_log;
  EXPECT_NO_THROW(c.validate());
  c.lambda = -1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_EQ(parse_loss_kind("regularized-log"), LossKind::regularized_log);
  EXPECT_EQ(parse_loss_kind("contrastive"), LossKind::contrastive);
  EXPECT_THROW(parse_loss_kind("hinge"), ConfigError);
}

TEST(TargetValue, SimilarIsOne) {
  EXPECT_EQ(target_value(PairTarget::similar), 1.0);
  EXPECT_EQ(target_value(PairTarget::dissimilar), 0.0);
}

}  // namespace
}  // namespace oneshot
