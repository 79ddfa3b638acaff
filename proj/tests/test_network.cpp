#include <gtest/gtest.h>

#include <sstream>

#include "oneshot/error.hpp"
#include "oneshot/network.hpp"
#include "test_support.hpp"

namespace oneshot {
namespace {

using testing::forward_oracle;
using testing::oracle_distance;

Eigen::VectorXd random_input(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd x(static_cast<Eigen::Index>(n));
  for (auto& v : x) v = u(rng);
  return x;
}

std::vector<double> as_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

SiameseModel identity_model(std::size_t n) {
  SiameseModel m({n, n}, Activation::linear);
  m.parameters()[0].weights = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                        static_cast<Eigen::Index>(n));
  m.parameters()[0].bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  return m;
}

TEST(InitModel, ShapesChain) {
  Rng rng(1);
  const auto m = init_model({118, 64, 32, 16}, Activation::relu, rng);
  const auto& p = m.parameters();
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[0].weights.rows(), 118);
  EXPECT_EQ(p[0].weights.cols(), 64);
  EXPECT_EQ(p[1].weights.rows(), 64);
  EXPECT_EQ(p[1].weights.cols(), 32);
  EXPECT_EQ(p[2].weights.rows(), 32);
  EXPECT_EQ(p[2].weights.cols(), 16);
  EXPECT_EQ(p[2].bias.size(), 16);
}

TEST(InitModel, RejectsDegenerateLayouts) {
  Rng rng(1);
  EXPECT_THROW(init_model({5}, Activation::relu, rng), ConfigError);
  EXPECT_THROW(init_model({5, 0, 3}, Activation::relu, rng), ConfigError);
}

TEST(InitModel, GlorotBoundsAndZeroBias) {
  Rng rng(3);
  const auto m = init_model({20, 10, 4}, Activation::relu, rng);
  const double b0 = std::sqrt(6.0 / 30.0);
  const double b1 = std::sqrt(6.0 / 14.0);
  EXPECT_LE(m.parameters()[0].weights.cwiseAbs().maxCoeff(), b0);
  EXPECT_LE(m.parameters()[1].weights.cwiseAbs().maxCoeff(), b1);
  EXPECT_GT(m.parameters()[0].weights.cwiseAbs().maxCoeff(), 0.8 * b0);
  EXPECT_TRUE(m.parameters()[0].bias.isZero(0.0));
  EXPECT_TRUE(m.parameters()[1].bias.isZero(0.0));
}

TEST(InitModel, SameSeedBitIdentical) {
  Rng a(12), b(12);
  const auto x = init_model({7, 5, 3}, Activation::tanh, a);
  const auto y = init_model({7, 5, 3}, Activation::tanh, b);
  for (std::size_t l = 0; l < 2; ++l) {
    EXPECT_EQ(x.parameters()[l].weights, y.parameters()[l].weights);
    EXPECT_EQ(x.parameters()[l].bias, y.parameters()[l].bias);
  }
}

TEST(Embed, ZeroParametersGiveZeroEmbedding) {
  SiameseModel m({4, 3, 2}, Activation::relu);
  for (auto& p : m.parameters()) {
    p.weights.setZero();
    p.bias.setZero();
  }
  Rng rng(1);
  EXPECT_TRUE(embed(m, random_input(4, rng)).isZero(0.0));
}

TEST(Embed, IdentityNetworkReturnsInput) {
  const auto m = identity_model(3);
  Eigen::VectorXd x(3);
  x << 0.25, -1.5, 7.0;
  EXPECT_EQ(embed(m, x), x);
}

TEST(Embed, MatchesLoopOracle) {
  Rng rng(21);
  for (auto act : {Activation::relu, Activation::tanh, Activation::sigmoid, Activation::linear}) {
    const auto m = init_model({6, 8, 5, 3}, act, rng);
    for (int t = 0; t < 10; ++t) {
      const auto x = random_input(6, rng);
      const auto got = embed(m, x);
      const auto want = forward_oracle(m, as_std(x));
      for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_NEAR(got(static_cast<Eigen::Index>(i)), want[i], 1e-12);
      }
    }
  }
}

TEST(Embed, BatchForwardMatchesSingleRows) {
  Rng rng(5);
  const auto m = init_model({4, 6, 2}, Activation::relu, rng);
  FeatureMatrix rows(3, 4);
  for (Eigen::Index r = 0; r < 3; ++r) rows.row(r) = random_input(4, rng).transpose();
  const auto out = m.network().forward(rows);
  for (Eigen::Index r = 0; r < 3; ++r) {
    const Eigen::VectorXd single = embed(m, rows.row(r).transpose());
    EXPECT_TRUE(out.row(r).transpose().isApprox(single, 1e-14));
  }
}

TEST(Embed, WidthMismatchThrows) {
  Rng rng(1);
  const auto m = init_model({4, 3}, Activation::relu, rng);
  EXPECT_THROW(embed(m, Eigen::VectorXd::Zero(5)), ConfigError);
  EXPECT_THROW(distance(m, Eigen::VectorXd::Zero(4), Eigen::VectorXd::Zero(3)), ConfigError);
}

TEST(Distance, IdentityAndThreeFourFive) {
  const auto m = identity_model(2);
  Eigen::VectorXd a(2), b(2);
  a << 0.0, 0.0;
  b << 3.0, 4.0;
  EXPECT_DOUBLE_EQ(distance(m, a, b), 5.0);
  EXPECT_EQ(distance(m, b, b), 0.0);
}

TEST(Distance, MatchesOracleAndIsSymmetric) {
  Rng rng(8);
  for (int t = 0; t < 25; ++t) {
    const auto m = init_model({5, 7, 4}, Activation::relu, rng);
    const auto a = random_input(5, rng);
    const auto b = random_input(5, rng);
    const auto c = random_input(5, rng);
    EXPECT_NEAR(distance(m, a, b), oracle_distance(m, as_std(a), as_std(b)), 1e-12);
    EXPECT_EQ(distance(m, a, b), distance(m, b, a));
    EXPECT_LE(distance(m, a, c), distance(m, a, b) + distance(m, b, c) + 1e-12);
    EXPECT_GE(distance(m, a, b), 0.0);
  }
}

TEST(SiameseModel, TwinsShareOneParameterSet) {
  Rng rng(2);
  auto m = init_model({3, 2}, Activation::relu, rng);
  EXPECT_EQ(&m.twin(SiameseModel::Twin::left), &m.twin(SiameseModel::Twin::right));
  m.parameters()[0].weights(0, 0) += 1.0;
  EXPECT_EQ(m.twin(SiameseModel::Twin::left).parameters()[0].weights(0, 0),
            m.twin(SiameseModel::Twin::right).parameters()[0].weights(0, 0));
}

TEST(Checkpoint, RoundTripIsExact) {
  Rng rng(4);
  auto m = init_model({6, 5, 3}, Activation::tanh, rng);
  m.parameters()[1].bias << 0.1, -1e-300, 3.0 / 7.0;
  std::stringstream buf;
  write_checkpoint(buf, m);
  const auto back = read_checkpoint(buf);
  EXPECT_EQ(back.layer_sizes(), m.layer_sizes());
  EXPECT_EQ(back.hidden_activation(), Activation::tanh);
  for (std::size_t l = 0; l < 2; ++l) {
    EXPECT_EQ(back.parameters()[l].weights, m.parameters()[l].weights);
    EXPECT_EQ(back.parameters()[l].bias, m.parameters()[l].bias);
  }
}

TEST(Checkpoint, RejectsGarbage) {
  std::stringstream buf("not a checkpoint\n");
  EXPECT_THROW(read_checkpoint(buf), ParseError);
}

}  // namespace
}  // namespace oneshot
