#include "linlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <random>
#include <string>

#include "linlab/errors.hpp"

namespace linlab {

namespace {

std::string shape_str(const Mat64& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

constexpr double kDeflationCancellation = 1e-8;

using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;

ConstVecMap as_eigen(std::span<const double> v) {
  return ConstVecMap(v.data(), static_cast<Index>(v.size()));
}

Eigen::VectorXd seeded_unit_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd x(n);
  for (Index i = 0; i < n; ++i) x[i] = dist(gen);
  x.normalize();
  return x;
}

}  // namespace

Mat64::Mat64(Index rows, Index cols) {
  LINLAB_REQUIRE(rows >= 1 && cols >= 1, "Mat64: dimensions must be positive");
  m_ = RowMajorMatrix::Zero(rows, cols);
}

Mat64::Mat64(Index rows, Index cols, std::vector<double> entries) {
  LINLAB_REQUIRE(rows >= 1 && cols >= 1, "Mat64: dimensions must be positive");
  LINLAB_REQUIRE(static_cast<Index>(entries.size()) == rows * cols,
                 "Mat64: entry count does not match rows*cols");
  m_ = Eigen::Map<const RowMajorMatrix>(entries.data(), rows, cols);
}

Mat64 Mat64::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  LINLAB_REQUIRE(rows.size() >= 1, "Mat64::from_rows: no rows");
  const auto ncols = rows.begin()->size();
  std::vector<double> entries;
  entries.reserve(rows.size() * ncols);
  for (const auto& r : rows) {
    LINLAB_REQUIRE(r.size() == ncols, "Mat64::from_rows: ragged rows");
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return Mat64(static_cast<Index>(rows.size()), static_cast<Index>(ncols), std::move(entries));
}

Mat64 Mat64::identity(Index n) {
  LINLAB_REQUIRE(n >= 1, "Mat64::identity: n must be positive");
  return Mat64(RowMajorMatrix::Identity(n, n));
}

Mat64 Mat64::outer(std::span<const double> u, std::span<const double> v) {
  LINLAB_REQUIRE(!u.empty() && !v.empty(), "Mat64::outer: empty vector");
  return Mat64(RowMajorMatrix(as_eigen(u) * as_eigen(v).transpose()));
}

Mat64& Mat64::operator+=(const Mat64& o) {
  LINLAB_REQUIRE(same_shape(o), "Mat64 +=: shape mismatch " + shape_str(*this) + " vs " + shape_str(o));
  m_ += o.m_;
  return *this;
}

Mat64& Mat64::operator-=(const Mat64& o) {
  LINLAB_REQUIRE(same_shape(o), "Mat64 -=: shape mismatch " + shape_str(*this) + " vs " + shape_str(o));
  m_ -= o.m_;
  return *this;
}

double dot(std::span<const double> u, std::span<const double> v) {
  LINLAB_REQUIRE(u.size() == v.size(), "dot: length mismatch");
  return as_eigen(u).dot(as_eigen(v));
}

double norm(std::span<const double> u) { return as_eigen(u).norm(); }

Mat64 matmul(const Mat64& a, const Mat64& b) {
  LINLAB_REQUIRE(a.cols() == b.rows(), "matmul: dimension mismatch " + shape_str(a) + " · " + shape_str(b));
  RowMajorMatrix out(a.rows(), b.cols());
  out.noalias() = a.eigen() * b.eigen();
  return Mat64(std::move(out));
}

Mat64 matmul_chain(std::span<const Mat64> ms) {
  LINLAB_REQUIRE(!ms.empty(), "matmul_chain: empty list");
  Mat64 acc = ms.front();
  for (std::size_t i = 1; i < ms.size(); ++i) acc = matmul(acc, ms[i]);
  return acc;
}

std::optional<double> folded_angle_degrees(std::span<const double> u, std::span<const double> v) {
  LINLAB_REQUIRE(u.size() == v.size(), "folded_angle_degrees: length mismatch");
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu < kDegenerateNorm || nv < kDegenerateNorm) return std::nullopt;
  double diff2 = 0.0;
  double sum2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u[i] / nu;
    const double b = v[i] / nv;
    diff2 += (a - b) * (a - b);
    sum2 += (a + b) * (a + b);
  }
  const double d = std::sqrt(diff2);
  const double s = std::sqrt(sum2);
  // Folding a -> 180 - a swaps the roles of |û - v̂| and |û + v̂|.
  const double rad = 2.0 * std::atan2(std::min(d, s), std::max(d, s));
  return rad * (180.0 / std::numbers::pi);
}

std::optional<double> projection_scalar(std::span<const double> u, std::span<const double> v) {
  LINLAB_REQUIRE(u.size() == v.size(), "projection_scalar: length mismatch");
  const double vv = dot(v, v);
  if (std::sqrt(vv) < kDegenerateNorm) return std::nullopt;
  return dot(u, v) / vv;
}

SingularPair top_two_singular_values(const Mat64& m) {
  LINLAB_REQUIRE(!m.empty(), "top_two_singular_values: empty matrix");
  const auto& a = m.eigen();
  const bool use_rows = a.rows() <= a.cols();
  const Index n = use_rows ? a.rows() : a.cols();

  SingularPair out;
  if (n == 1) {
    // A single row or column: the only singular value is its norm.
    out.sigma1 = a.norm();
    return out;
  }

  // One half of the Gram product: h = mᵀx (row side) or m x (column side).
  // The Rayleigh quotient is |h|², so singular values come out as |h| and
  // keep full relative precision instead of the sqrt(eps) floor of sqrt(xᵀGx).
  Eigen::VectorXd h;
  auto half = [&](const Eigen::VectorXd& x) {
    if (use_rows) h.noalias() = a.transpose() * x;
    else h.noalias() = a * x;
  };
  auto other_half = [&](Eigen::VectorXd& y) {
    if (use_rows) y.noalias() = a * h;
    else y.noalias() = a.transpose() * h;
  };

  // Phase 1: dominant eigenpair of the Gram matrix.
  Eigen::VectorXd x = seeded_unit_vector(n, 0x9e3779b97f4a7c15ULL);
  Eigen::VectorXd y(n);
  double rho = 0.0;
  double prev = std::numeric_limits<double>::quiet_NaN();
  std::size_t it = 0;
  for (;; ++it) {
    if (it == kPowerIterationCap) throw ConvergenceError("top_two_singular_values: sigma1 did not converge", it);
    half(x);
    rho = h.squaredNorm();
    other_half(y);
    const double ny = y.norm();
    if (ny == 0.0) {
      out.iterations = it + 1;
      return out;  // zero matrix
    }
    if (std::abs(rho - prev) <= kPowerIterationTolerance * rho) break;
    prev = rho;
    x = y / ny;
  }
  const Eigen::VectorXd v1 = x.normalized();
  const double lambda1 = rho;
  out.sigma1 = std::sqrt(lambda1);
  out.iterations = it + 1;

  // Phase 2: same iteration restricted to the complement of v1. Tolerance is
  // measured against lambda1 so a numerically rank-1 matrix stops at once.
  x = seeded_unit_vector(n, 0xd1b54a32d192ed03ULL);
  prev = std::numeric_limits<double>::quiet_NaN();
  std::size_t it2 = 0;
  for (;; ++it2) {
    if (it2 == kPowerIterationCap) throw ConvergenceError("top_two_singular_values: sigma2 did not converge", it2);
    const double n0 = x.norm();
    x -= v1.dot(x) * v1;
    x -= v1.dot(x) * v1;
    const double nx = x.norm();
    if (nx == 0.0) {
      rho = 0.0;
      break;
    }
    // G x lies in span(v1) up to rounding: the complement carries no signal
    // above noise and rho from the previous pass stands.
    if (it2 > 0 && nx <= kDeflationCancellation * n0) break;
    x /= nx;
    half(x);
    rho = h.squaredNorm();
    if (std::abs(rho - prev) <= kPowerIterationTolerance * lambda1) break;
    prev = rho;
    other_half(y);
    if (y.norm() == 0.0) break;
    x = y;
  }
  out.sigma2 = std::min(std::sqrt(rho), out.sigma1);
  out.iterations += it2 + 1;
  return out;
}

}  // namespace linlab
