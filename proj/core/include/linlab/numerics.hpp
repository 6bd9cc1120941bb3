#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace linlab {

using Index = Eigen::Index;
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec64 = std::vector<double>;

// Rows or vectors whose Euclidean norm falls below this are treated as degenerate.
inline constexpr double kDegenerateNorm = 1e-30;

/// Dense row-major matrix of 64-bit reals.
///
/// Thin value type over an Eigen row-major matrix so every module shares one
/// storage layout. Rows are exposed as spans so the vector primitives below
/// can consume them without copies.
class Mat64 {
 public:
  Mat64() = default;
  Mat64(Index rows, Index cols);
  Mat64(Index rows, Index cols, std::vector<double> entries);
  explicit Mat64(RowMajorMatrix m) : m_(std::move(m)) {}

  static Mat64 from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Mat64 identity(Index n);
  static Mat64 zeros(Index rows, Index cols) { return Mat64(rows, cols); }
  static Mat64 outer(std::span<const double> u, std::span<const double> v);

  Index rows() const noexcept { return m_.rows(); }
  Index cols() const noexcept { return m_.cols(); }
  Index size() const noexcept { return m_.size(); }
  bool empty() const noexcept { return m_.size() == 0; }

  double operator()(Index r, Index c) const { return m_(r, c); }
  double& operator()(Index r, Index c) { return m_(r, c); }

  std::span<const double> row(Index r) const {
    return {m_.data() + r * m_.cols(), static_cast<std::size_t>(m_.cols())};
  }
  std::span<double> row(Index r) {
    return {m_.data() + r * m_.cols(), static_cast<std::size_t>(m_.cols())};
  }
  std::span<const double> data() const { return {m_.data(), static_cast<std::size_t>(m_.size())}; }
  std::span<double> data() { return {m_.data(), static_cast<std::size_t>(m_.size())}; }

  const RowMajorMatrix& eigen() const noexcept { return m_; }
  RowMajorMatrix& eigen() noexcept { return m_; }

  Mat64 transpose() const { return Mat64(RowMajorMatrix(m_.transpose())); }
  double frobenius_norm() const { return m_.norm(); }
  bool all_finite() const { return m_.allFinite(); }
  bool same_shape(const Mat64& o) const noexcept { return rows() == o.rows() && cols() == o.cols(); }

  Mat64& operator+=(const Mat64& o);
  Mat64& operator-=(const Mat64& o);
  Mat64& operator*=(double s) {
    m_ *= s;
    return *this;
  }

  friend Mat64 operator+(Mat64 a, const Mat64& b) { return a += b; }
  friend Mat64 operator-(Mat64 a, const Mat64& b) { return a -= b; }
  friend Mat64 operator*(double s, Mat64 a) { return a *= s; }
  friend bool operator==(const Mat64& a, const Mat64& b) {
    return a.same_shape(b) && a.m_ == b.m_;
  }

 private:
  RowMajorMatrix m_;
};

double dot(std::span<const double> u, std::span<const double> v);
double norm(std::span<const double> u);

/// Matrix product a·b. Throws ContractViolation when a.cols != b.rows.
Mat64 matmul(const Mat64& a, const Mat64& b);

/// Left-to-right product ms[0]·ms[1]···ms[n-1].
Mat64 matmul_chain(std::span<const Mat64> ms);

/// Angle between u and v in degrees, folded so that anything above 90 is
/// reported as 180 - angle. Parallel and anti-parallel vectors both give 0.
/// Returns nullopt when either norm is below kDegenerateNorm.
///
/// Evaluated as 2·atan2(|û - v̂|, |û + v̂|) on the unit vectors; this equals
/// arccos of the clamped cosine but keeps full precision near 0 and 180.
std::optional<double> folded_angle_degrees(std::span<const double> u, std::span<const double> v);

/// Least-squares scalar α minimising |u - α v|, i.e. <u,v>/<v,v>.
/// nullopt when |v| < kDegenerateNorm.
std::optional<double> projection_scalar(std::span<const double> u, std::span<const double> v);

struct SingularPair {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  std::size_t iterations = 0;  // total power iterations across both phases
};

inline constexpr std::size_t kPowerIterationCap = 10'000;
inline constexpr double kPowerIterationTolerance = 1e-12;

/// Two largest singular values via power iteration on the Gram matrix of the
/// shorter side, with orthogonal deflation for the second one.
/// Throws ConvergenceError once kPowerIterationCap is hit.
SingularPair top_two_singular_values(const Mat64& m);

}  // namespace linlab
