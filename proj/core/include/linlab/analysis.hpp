#pragma once

#include <cstddef>
#include <limits>
#include <span>

#include "linlab/model.hpp"
#include "linlab/numerics.hpp"

namespace linlab {

/// Folded pairwise angle summary over the rows of one matrix, in degrees.
/// Rows with norm below kDegenerateNorm are left out and counted in
/// skipped_rows. With fewer than two usable rows the stats are undefined
/// (pair_count == 0, angles NaN).
struct AngleStats {
  double mean_deg = std::numeric_limits<double>::quiet_NaN();
  double max_deg = std::numeric_limits<double>::quiet_NaN();
  double min_deg = std::numeric_limits<double>::quiet_NaN();
  std::size_t pair_count = 0;
  std::size_t skipped_rows = 0;

  bool defined() const noexcept { return pair_count > 0; }
};

/// Per-pair angles are computed exactly (half-angle form) while
/// pairs·cols stays below this; above it they come from the Gram matrix of
/// the unit rows, which is accurate to about 1e-6 degrees near 0.
inline constexpr double kDirectAnglePairBudget = 5e7;

AngleStats pairwise_row_angle_stats(const Mat64& m);

/// Scalars recovered from a first-layer gradient.
struct ProportionalityReport {
  Vec64 alphas;     // per-sample α_i with ∂θ_1[0]_i ≈ α_i x_i
  Vec64 ratios;     // per-row r_j with ∂θ_1[j] ≈ r_j · reference
  Vec64 reference;  // (1/b) Σ α_i x_i
  double residual = std::numeric_limits<double>::quiet_NaN();      // relative
  double abs_residual = std::numeric_limits<double>::quiet_NaN();  // |∂θ_1[0] - reference|
  std::size_t skipped_samples = 0;  // samples with a degenerate x_i
  bool defined = false;             // false when the reference vector is degenerate
};

/// `per_sample_row0` holds ∂θ_1[0] of each single-sample step (b x n),
/// `batch_grad` the full batch ∂θ_1 (k_1 x n), `inputs` the batch (b x n).
ProportionalityReport extract_proportionality(const Mat64& per_sample_row0, const Mat64& batch_grad,
                                              const Mat64& inputs);

/// max over row pairs of |r_{j2} g[j1] - r_{j1} g[j2]| / max(|r_{j2} g[j1]|, |r_{j1} g[j2]|).
/// Pairs where both sides vanish are skipped.
double cross_proportionality_residual(const Mat64& grad, std::span<const double> ratios);

/// Predicted common column factor of ∂θ_l for a 2-class softmax-NLL net:
/// v_l = (θ_L···θ_{l+1})ᵀ (1, -1). Layers are 0-based; the last layer gives (1, -1).
Vec64 analytic_direction(const LinearNet& net, Index layer);

struct Rank1Report {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double ratio = std::numeric_limits<double>::quiet_NaN();            // sigma2 / sigma1
  double oracle_residual = std::numeric_limits<double>::quiet_NaN();  // |∂θ - v ŵᵀ|_F / |∂θ|_F
  Vec64 direction;
  bool degenerate = false;  // gradient (or direction) norm below kDegenerateNorm
};

Rank1Report rank1_report(const GradientSet& grads, const LinearNet& net, Index layer);

/// σ2/σ1 of an arbitrary matrix (NaN for a zero matrix). Used for momentum
/// velocities, which carry no rank-1 guarantee.
double singular_ratio(const Mat64& m);

}  // namespace linlab
