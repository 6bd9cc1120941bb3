#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "linlab/errors.hpp"
#include "linlab/optim.hpp"
#include "oracles.hpp"

using namespace linlab;

namespace {

LinearNet scalar_net(double theta) {
  // 1x1 layers are not a valid 2-class head, so the net is built by hand.
  return LinearNet{ArchSpec{{{1, 1}}, "scalar"}, {Mat64::from_rows({{theta}})}, 0};
}

GradientSet scalar_grad(double g) { return GradientSet{{Mat64::from_rows({{g}})}, 0}; }

std::vector<GradientSet> random_sequence(std::size_t n, std::uint64_t seed) {
  std::vector<GradientSet> seq;
  for (std::size_t t = 0; t < n; ++t)
    seq.push_back(GradientSet{{oracle::random_matrix(3, 4, seed + 2 * t), oracle::random_matrix(2, 3, seed + 2 * t + 1)}, t + 1});
  return seq;
}

}  // namespace

TEST(Sgd, ZeroLearningRateLeavesNetwork) {
  auto net = init_network(ArchSpec::from_widths({4, 3, 2}), 0);
  const auto before = net.layers;
  sgd_step(net, random_sequence(1, 1).front(), 0.0);
  for (std::size_t l = 0; l < before.size(); ++l) EXPECT_EQ(net.layers[l], before[l]);
}

TEST(Sgd, ScalarStep) {
  auto net = scalar_net(1.0);
  sgd_step(net, scalar_grad(2.0), 0.1);
  EXPECT_DOUBLE_EQ(net.layers[0](0, 0), 0.8);
}

TEST(Sgd, FixedGradientsAdd) {
  auto net = scalar_net(1.0);
  sgd_step(net, scalar_grad(2.0), 0.1);
  sgd_step(net, scalar_grad(-0.5), 0.1);
  EXPECT_NEAR(net.layers[0](0, 0), 1.0 - 0.1 * (2.0 - 0.5), 1e-15);
}

TEST(Sgd, ShapeMismatchThrows) {
  auto net = scalar_net(1.0);
  EXPECT_THROW(sgd_step(net, GradientSet{{Mat64(2, 1)}, 0}, 0.1), ContractViolation);
}

TEST(Momentum, BetaZeroIsSgd) {
  auto a = init_network(ArchSpec::from_widths({4, 3, 2}), 2);
  auto b = a;
  auto state = MomentumState::zeros_like(b, 0.0);
  for (const auto& g : random_sequence(3, 5)) {
    sgd_step(a, g, 0.05);
    momentum_step(b, state, g, 0.05);
  }
  for (std::size_t l = 0; l < a.layers.size(); ++l) EXPECT_EQ(a.layers[l], b.layers[l]);
}

TEST(Momentum, ScalarVelocitySequence) {
  auto net = scalar_net(0.0);
  auto state = MomentumState::zeros_like(net, 0.5);
  momentum_step(net, state, scalar_grad(1.0), 0.1);
  EXPECT_DOUBLE_EQ(state.velocities[0](0, 0), 0.5);
  momentum_step(net, state, scalar_grad(1.0), 0.1);
  EXPECT_DOUBLE_EQ(state.velocities[0](0, 0), 0.75);
  EXPECT_EQ(state.t, 2u);
  EXPECT_DOUBLE_EQ(net.layers[0](0, 0), -0.1 * (0.5 + 0.75));
}

TEST(Momentum, VelocityMatchesUnrolledSum) {
  const double beta = 0.9;
  const auto seq = random_sequence(20, 40);
  LinearNet net{ArchSpec{{{4, 3}, {3, 2}}, "x"}, {Mat64(3, 4), Mat64(2, 3)}, 0};
  auto state = MomentumState::zeros_like(net, beta);
  for (const auto& g : seq) momentum_step(net, state, g, 0.01);
  const std::size_t n = seq.size();
  for (std::size_t l = 0; l < 2; ++l) {
    Mat64 direct(seq[0].grads[l].rows(), seq[0].grads[l].cols());
    for (std::size_t t = 1; t <= n; ++t)
      direct += ((1.0 - beta) * std::pow(beta, static_cast<double>(n - t))) * seq[t - 1].grads[l];
    EXPECT_LE(oracle::rel_frobenius(state.velocities[l], direct), 1e-14);
  }
}

TEST(Momentum, BetaOutOfRange) {
  const auto net = scalar_net(0.0);
  EXPECT_THROW(MomentumState::zeros_like(net, 1.0), ContractViolation);
  EXPECT_THROW(MomentumState::zeros_like(net, -0.1), ContractViolation);
  EXPECT_THROW(gamma_schedule(1.0, 3), ContractViolation);
}

TEST(Gamma, HandSummedSchedule) {
  const auto s = gamma_schedule(0.9, 3);
  ASSERT_EQ(s.gammas.size(), 3u);
  EXPECT_NEAR(s.at(1), 0.1 * (1 + 0.9 + 0.81), 1e-15);
  EXPECT_NEAR(s.at(1), 0.271, 1e-15);
  EXPECT_NEAR(s.at(2), 0.19, 1e-15);
  EXPECT_NEAR(s.at(3), 0.1, 1e-15);
}

TEST(Gamma, LastTermAndDegenerateBeta) {
  for (double beta : {0.0, 0.3, 0.9, 0.99}) EXPECT_NEAR(gamma_schedule(beta, 17).at(17), 1.0 - beta, 1e-16);
  for (double g : gamma_schedule(0.0, 5).gammas) EXPECT_EQ(g, 1.0);
  EXPECT_THROW(gamma_schedule(0.5, 0), ContractViolation);
}

TEST(Gamma, ClosedFormToMachinePrecision) {
  for (double beta : {0.5, 0.9, 0.99}) {
    const auto s = gamma_schedule(beta, 50);
    for (std::size_t t = 1; t <= 50; ++t)
      EXPECT_LE(std::abs(s.at(t) - (1.0 - std::pow(beta, static_cast<double>(50 - t + 1)))), 1e-15);
  }
}

TEST(GammaVariant, EdgeValues) {
  auto a = scalar_net(1.0);
  gamma_variant_step(a, scalar_grad(2.0), 0.1, 0.5);
  EXPECT_DOUBLE_EQ(a.layers[0](0, 0), 0.9);
  auto b = scalar_net(1.0);
  gamma_variant_step(b, scalar_grad(2.0), 0.1, 0.0);
  EXPECT_EQ(b.layers[0](0, 0), 1.0);
  auto c = scalar_net(1.0);
  auto d = scalar_net(1.0);
  gamma_variant_step(c, scalar_grad(2.0), 0.1, 1.0);
  sgd_step(d, scalar_grad(2.0), 0.1);
  EXPECT_EQ(c.layers[0], d.layers[0]);
}

TEST(Identity, ScalarHandComputation) {
  const std::vector<GradientSet> seq{scalar_grad(1.0), scalar_grad(1.0)};
  EXPECT_EQ(momentum_identity_residual(seq, 0.5), 0.0);
}

TEST(Identity, SingleStep) {
  const auto seq = random_sequence(1, 3);
  EXPECT_LE(momentum_identity_residual(seq, 0.7), 1e-16);
}

TEST(Identity, RandomSequences) {
  for (double beta : {0.0, 0.5, 0.9, 0.99}) EXPECT_LE(momentum_identity_residual(random_sequence(50, 8), beta), 1e-12);
}

TEST(Identity, SumOfVelocitiesByHand) {
  // LHS via explicit recursion, RHS via explicit γ sums, both in the test.
  const double beta = 0.9;
  const auto seq = random_sequence(10, 21);
  Mat64 v(3, 4), lhs(3, 4), rhs(3, 4);
  for (std::size_t s = 0; s < seq.size(); ++s) {
    v = beta * v + (1.0 - beta) * seq[s].grads[0];
    lhs += v;
    double gamma = 0.0;
    for (std::size_t i = s; i < seq.size(); ++i) gamma += (1.0 - beta) * std::pow(beta, static_cast<double>(i - s));
    rhs += gamma * seq[s].grads[0];
  }
  EXPECT_LE(oracle::rel_frobenius(lhs, rhs), 1e-14);
  EXPECT_LE(momentum_identity_residual(seq, beta), 1e-14);
}

TEST(Identity, RejectsEmptyAndRaggedSequences) {
  EXPECT_THROW(momentum_identity_residual(std::span<const GradientSet>(), 0.5), ContractViolation);
  std::vector<GradientSet> ragged{scalar_grad(1.0), GradientSet{{Mat64(2, 2)}, 0}};
  EXPECT_THROW(momentum_identity_residual(ragged, 0.5), ContractViolation);
}
