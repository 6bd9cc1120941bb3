#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "linlab/model.hpp"

namespace linlab {

/// Velocities in exponential-moving-average form:
///   V^t = β V^{t-1} + (1-β) ∂θ^t,  θ^{t+1} = θ^t - lr V^t,  V^0 = 0.
struct MomentumState {
  std::vector<Mat64> velocities;
  double beta = 0.9;
  std::size_t t = 0;

  static MomentumState zeros_like(const LinearNet& net, double beta);
};

/// γ_t = (1-β) Σ_{i=t}^{n} β^{i-t} for t = 1..n (stored 0-based).
struct GammaSchedule {
  std::size_t horizon = 0;
  double beta = 0.0;
  std::vector<double> gammas;

  double at(std::size_t t) const { return gammas.at(t - 1); }
};

struct TrainHyper {
  double learning_rate = 1e-2;
  Index batch = 30;
  std::size_t steps = 50;
};

/// θ_l <- θ_l - lr ∂θ_l.
void sgd_step(LinearNet& net, const GradientSet& grads, double lr);

void momentum_step(LinearNet& net, MomentumState& state, const GradientSet& grads, double lr);

/// Direct summation, cross-checked against 1 - β^{n-t+1}. Throws
/// std::logic_error if the two disagree by more than 1e-15.
GammaSchedule gamma_schedule(double beta, std::size_t n);

/// θ_l <- θ_l - lr γ_t ∂θ_l.
void gamma_variant_step(LinearNet& net, const GradientSet& grads, double lr, double gamma_t);

/// Relative Frobenius gap between Σ_s V^s (by the velocity recursion) and
/// Σ_s γ_s ∂θ^s (by the schedule), maximised over layers.
double momentum_identity_residual(std::span<const GradientSet> grad_sequence, double beta);

}  // namespace linlab
