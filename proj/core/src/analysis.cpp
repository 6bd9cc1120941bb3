#include "linlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "linlab/errors.hpp"

namespace linlab {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Folded angle between two unit rows, half-angle form.
double folded_unit_angle(const double* a, const double* b, Index n) {
  double diff2 = 0.0, sum2 = 0.0;
  for (Index k = 0; k < n; ++k) {
    const double d = a[k] - b[k];
    const double s = a[k] + b[k];
    diff2 += d * d;
    sum2 += s * s;
  }
  const double d = std::sqrt(diff2), s = std::sqrt(sum2);
  return 2.0 * std::atan2(std::min(d, s), std::max(d, s)) * kRadToDeg;
}

}  // namespace

AngleStats pairwise_row_angle_stats(const Mat64& m) {
  LINLAB_REQUIRE(m.rows() >= 2, "pairwise_row_angle_stats: need at least 2 rows");
  AngleStats st;

  std::vector<Index> usable;
  usable.reserve(static_cast<std::size_t>(m.rows()));
  for (Index r = 0; r < m.rows(); ++r) {
    if (norm(m.row(r)) >= kDegenerateNorm) usable.push_back(r);
  }
  st.skipped_rows = static_cast<std::size_t>(m.rows()) - usable.size();
  const auto u = static_cast<Index>(usable.size());
  if (u < 2) return st;

  RowMajorMatrix unit(u, m.cols());
  for (Index i = 0; i < u; ++i) unit.row(i) = m.eigen().row(usable[static_cast<std::size_t>(i)]).normalized();

  double sum = 0.0, lo = 180.0, hi = 0.0;
  auto record = [&](double a) {
    sum += a;
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  };

  const double pairs = 0.5 * static_cast<double>(u) * static_cast<double>(u - 1);
  if (pairs * static_cast<double>(m.cols()) <= kDirectAnglePairBudget) {
    for (Index i = 0; i < u; ++i) {
      for (Index j = i + 1; j < u; ++j) record(folded_unit_angle(&unit(i, 0), &unit(j, 0), m.cols()));
    }
  } else {
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(u, u);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(unit);
    for (Index j = 0; j < u; ++j) {
      for (Index i = j + 1; i < u; ++i) {
        const double c = std::min(std::abs(gram(i, j)), 1.0);
        record(std::acos(c) * kRadToDeg);
      }
    }
  }
  st.pair_count = static_cast<std::size_t>(pairs);
  st.mean_deg = sum / pairs;
  st.min_deg = lo;
  st.max_deg = hi;
  return st;
}

ProportionalityReport extract_proportionality(const Mat64& per_sample_row0, const Mat64& batch_grad,
                                              const Mat64& inputs) {
  LINLAB_REQUIRE(per_sample_row0.same_shape(inputs), "extract_proportionality: per-sample rows must match inputs");
  LINLAB_REQUIRE(batch_grad.cols() == inputs.cols(), "extract_proportionality: gradient width mismatch");
  const Index b = inputs.rows();
  ProportionalityReport rep;
  rep.alphas.assign(static_cast<std::size_t>(b), 0.0);

  Eigen::VectorXd ref = Eigen::VectorXd::Zero(inputs.cols());
  for (Index i = 0; i < b; ++i) {
    const auto alpha = projection_scalar(per_sample_row0.row(i), inputs.row(i));
    if (!alpha) {
      ++rep.skipped_samples;
      continue;
    }
    rep.alphas[static_cast<std::size_t>(i)] = *alpha;
    ref += *alpha * inputs.eigen().row(i).transpose();
  }
  ref /= static_cast<double>(b);
  rep.reference.assign(ref.data(), ref.data() + ref.size());

  const double row0_norm = norm(batch_grad.row(0));
  rep.abs_residual = (batch_grad.eigen().row(0).transpose() - ref).norm();
  rep.residual = row0_norm >= kDegenerateNorm ? rep.abs_residual / row0_norm : rep.abs_residual;

  if (ref.norm() < kDegenerateNorm) return rep;
  rep.ratios.reserve(static_cast<std::size_t>(batch_grad.rows()));
  for (Index j = 0; j < batch_grad.rows(); ++j) rep.ratios.push_back(*projection_scalar(batch_grad.row(j), rep.reference));
  rep.defined = true;
  return rep;
}

double cross_proportionality_residual(const Mat64& grad, std::span<const double> ratios) {
  LINLAB_REQUIRE(static_cast<Index>(ratios.size()) == grad.rows(), "cross_proportionality_residual: ratio count mismatch");
  const auto& g = grad.eigen();
  const Index k = g.rows();
  Eigen::VectorXd norms(k);
  for (Index j = 0; j < k; ++j) norms[j] = g.row(j).norm();
  double worst = 0.0;
  for (Index j1 = 0; j1 < k; ++j1) {
    for (Index j2 = j1 + 1; j2 < k; ++j2) {
      const double r1 = ratios[static_cast<std::size_t>(j1)];
      const double r2 = ratios[static_cast<std::size_t>(j2)];
      const double scale = std::max(std::abs(r2) * norms[j1], std::abs(r1) * norms[j2]);
      if (scale < kDegenerateNorm) continue;
      const double gap = (r2 * g.row(j1) - r1 * g.row(j2)).norm();
      worst = std::max(worst, gap / scale);
    }
  }
  return worst;
}

Vec64 analytic_direction(const LinearNet& net, Index layer) {
  LINLAB_REQUIRE(layer >= 0 && layer < net.depth(), "analytic_direction: layer out of range");
  Eigen::VectorXd v(2);
  v << 1.0, -1.0;
  for (Index m = net.depth() - 1; m > layer; --m) {
    Eigen::VectorXd next = net.layers[static_cast<std::size_t>(m)].eigen().transpose() * v;
    v = std::move(next);
  }
  return Vec64(v.data(), v.data() + v.size());
}

Rank1Report rank1_report(const GradientSet& grads, const LinearNet& net, Index layer) {
  LINLAB_REQUIRE(layer >= 0 && layer < net.depth(), "rank1_report: layer out of range");
  LINLAB_REQUIRE(grads.grads.size() == net.layers.size(), "rank1_report: gradient set does not match network");
  const Mat64& g = grads.grads[static_cast<std::size_t>(layer)];
  LINLAB_REQUIRE(g.same_shape(net.layers[static_cast<std::size_t>(layer)]), "rank1_report: gradient shape mismatch");

  Rank1Report rep;
  rep.direction = analytic_direction(net, layer);
  const double gnorm = g.frobenius_norm();
  const Eigen::Map<const Eigen::VectorXd> v(rep.direction.data(), static_cast<Index>(rep.direction.size()));
  if (gnorm < kDegenerateNorm || v.norm() < kDegenerateNorm) {
    rep.degenerate = true;
    return rep;
  }
  const auto sv = top_two_singular_values(g);
  rep.sigma1 = sv.sigma1;
  rep.sigma2 = sv.sigma2;
  rep.ratio = sv.sigma1 > 0.0 ? sv.sigma2 / sv.sigma1 : std::numeric_limits<double>::quiet_NaN();

  const Eigen::VectorXd w_hat = g.eigen().transpose() * v / v.squaredNorm();
  rep.oracle_residual = (g.eigen() - v * w_hat.transpose()).norm() / gnorm;
  return rep;
}

double singular_ratio(const Mat64& m) {
  const auto sv = top_two_singular_values(m);
  return sv.sigma1 > 0.0 ? sv.sigma2 / sv.sigma1 : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace linlab
