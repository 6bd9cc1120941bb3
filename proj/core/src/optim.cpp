#include "linlab/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "linlab/errors.hpp"

namespace linlab {

namespace {

void require_matching(const LinearNet& net, const std::vector<Mat64>& mats, const char* who) {
  LINLAB_REQUIRE(mats.size() == net.layers.size(), std::string(who) + ": layer count mismatch");
  for (std::size_t l = 0; l < mats.size(); ++l) {
    LINLAB_REQUIRE(mats[l].same_shape(net.layers[l]),
                   std::string(who) + ": shape mismatch at layer " + std::to_string(l));
  }
}

void require_beta(double beta) {
  LINLAB_REQUIRE(beta >= 0.0 && beta < 1.0, "momentum factor beta must lie in [0, 1)");
}

}  // namespace

MomentumState MomentumState::zeros_like(const LinearNet& net, double beta) {
  require_beta(beta);
  MomentumState s;
  s.beta = beta;
  for (const auto& w : net.layers) s.velocities.push_back(Mat64::zeros(w.rows(), w.cols()));
  return s;
}

void sgd_step(LinearNet& net, const GradientSet& grads, double lr) {
  require_matching(net, grads.grads, "sgd_step");
  for (std::size_t l = 0; l < net.layers.size(); ++l) net.layers[l].eigen() -= lr * grads.grads[l].eigen();
}

void momentum_step(LinearNet& net, MomentumState& state, const GradientSet& grads, double lr) {
  require_beta(state.beta);
  require_matching(net, grads.grads, "momentum_step");
  require_matching(net, state.velocities, "momentum_step");
  const double beta = state.beta;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    auto& v = state.velocities[l].eigen();
    v = beta * v + (1.0 - beta) * grads.grads[l].eigen();
    net.layers[l].eigen() -= lr * v;
  }
  ++state.t;
}

GammaSchedule gamma_schedule(double beta, std::size_t n) {
  require_beta(beta);
  LINLAB_REQUIRE(n >= 1, "gamma_schedule: horizon must be >= 1");
  GammaSchedule s{n, beta, std::vector<double>(n)};
  for (std::size_t t = 1; t <= n; ++t) {
    // Neumaier-compensated sum of β^0 .. β^{n-t}.
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t i = t; i <= n; ++i) {
      const double term = std::pow(beta, static_cast<double>(i - t));
      const double next = sum + term;
      comp += std::abs(sum) >= std::abs(term) ? (sum - next) + term : (term - next) + sum;
      sum = next;
    }
    const double direct = (1.0 - beta) * (sum + comp);
    const double closed = 1.0 - std::pow(beta, static_cast<double>(n - t + 1));
    if (std::abs(direct - closed) > 1e-15) {
      throw std::logic_error("gamma_schedule: direct sum and closed form disagree at t=" + std::to_string(t));
    }
    s.gammas[t - 1] = direct;
  }
  return s;
}

void gamma_variant_step(LinearNet& net, const GradientSet& grads, double lr, double gamma_t) {
  require_matching(net, grads.grads, "gamma_variant_step");
  const double scale = lr * gamma_t;
  for (std::size_t l = 0; l < net.layers.size(); ++l) net.layers[l].eigen() -= scale * grads.grads[l].eigen();
}

double momentum_identity_residual(std::span<const GradientSet> grad_sequence, double beta) {
  LINLAB_REQUIRE(!grad_sequence.empty(), "momentum_identity_residual: empty sequence");
  require_beta(beta);
  const auto& first = grad_sequence.front().grads;
  for (const auto& gs : grad_sequence) {
    LINLAB_REQUIRE(gs.grads.size() == first.size(), "momentum_identity_residual: layer count varies");
    for (std::size_t l = 0; l < first.size(); ++l) {
      LINLAB_REQUIRE(gs.grads[l].same_shape(first[l]), "momentum_identity_residual: shape varies");
    }
  }
  const auto schedule = gamma_schedule(beta, grad_sequence.size());

  double worst = 0.0;
  for (std::size_t l = 0; l < first.size(); ++l) {
    const Index r = first[l].rows(), c = first[l].cols();
    RowMajorMatrix v = RowMajorMatrix::Zero(r, c);
    RowMajorMatrix lhs = RowMajorMatrix::Zero(r, c);
    RowMajorMatrix rhs = RowMajorMatrix::Zero(r, c);
    for (std::size_t s = 0; s < grad_sequence.size(); ++s) {
      const auto& g = grad_sequence[s].grads[l].eigen();
      v = beta * v + (1.0 - beta) * g;
      lhs += v;
      rhs += schedule.gammas[s] * g;
    }
    const double rel = (lhs - rhs).norm() / std::max(lhs.norm(), 1e-300);
    worst = std::max(worst, rel);
  }
  return worst;
}

}  // namespace linlab
