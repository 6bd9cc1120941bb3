#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "linlab/errors.hpp"
#include "linlab/numerics.hpp"
#include "oracles.hpp"

using namespace linlab;

TEST(Mat64, RejectsEmptyShapes) {
  EXPECT_THROW(Mat64(0, 3), ContractViolation);
  EXPECT_THROW(Mat64(2, 2, {1.0, 2.0, 3.0}), ContractViolation);
  EXPECT_THROW(Mat64::from_rows({{1.0, 2.0}, {3.0}}), ContractViolation);
}

TEST(Mat64, RowSpansAreContiguous) {
  auto m = Mat64::from_rows({{1, 2, 3}, {4, 5, 6}});
  auto r = m.row(1);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0], 4.0);
  EXPECT_EQ(r[2], 6.0);
  EXPECT_EQ(m.transpose()(2, 1), 6.0);
}

TEST(Matmul, IdentityLeavesMatrixUnchanged) {
  const auto m = oracle::random_matrix(3, 6, 11);
  EXPECT_EQ(matmul(Mat64::identity(3), m), m);
}

TEST(Matmul, HandArithmetic) {
  const auto c = matmul(Mat64::from_rows({{1, 2}, {3, 4}}), Mat64::from_rows({{1}, {1}}));
  EXPECT_EQ(c, Mat64::from_rows({{3}, {7}}));
}

TEST(Matmul, MatchesTripleLoop) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto a = oracle::random_matrix(7, 5, seed);
    const auto b = oracle::random_matrix(5, 4, seed + 100);
    const auto ref = oracle::naive_matmul(a, b);
    const auto got = matmul(a, b);
    for (Index i = 0; i < 7; ++i)
      for (Index j = 0; j < 4; ++j)
        EXPECT_LE(std::abs(got(i, j) - ref(i, j)), 1e-15 * std::max(1.0, std::abs(ref(i, j))) * 4);
  }
}

TEST(Matmul, ShapeMismatchThrows) {
  EXPECT_THROW(matmul(Mat64(2, 3), Mat64(2, 3)), ContractViolation);
}

TEST(MatmulChain, IdentitiesAndSingleton) {
  const std::vector<Mat64> ids(3, Mat64::identity(4));
  EXPECT_EQ(matmul_chain(ids), Mat64::identity(4));
  const std::vector<Mat64> one{oracle::random_matrix(3, 2, 4)};
  EXPECT_EQ(matmul_chain(one), one.front());
  EXPECT_THROW(matmul_chain(std::span<const Mat64>()), ContractViolation);
}

TEST(MatmulChain, AssociativityCrossCheck) {
  const auto a = oracle::random_matrix(4, 6, 1);
  const auto b = oracle::random_matrix(6, 3, 2);
  const auto c = oracle::random_matrix(3, 5, 3);
  const std::vector<Mat64> abc{a, b, c};
  const auto got = matmul_chain(abc);
  const auto left = oracle::naive_matmul(oracle::naive_matmul(a, b), c);
  const auto right = oracle::naive_matmul(a, oracle::naive_matmul(b, c));
  EXPECT_LE(oracle::rel_frobenius(got, left), 1e-14);
  EXPECT_LE(oracle::rel_frobenius(got, right), 1e-14);
}

TEST(FoldedAngle, KnownAngles) {
  EXPECT_NEAR(*folded_angle_degrees(Vec64{1, 0}, Vec64{0, 1}), 90.0, 1e-12);
  EXPECT_NEAR(*folded_angle_degrees(Vec64{1, 2, 3}, Vec64{-2, -4, -6}), 0.0, 1e-12);
  EXPECT_NEAR(*folded_angle_degrees(Vec64{1, 0}, Vec64{1, 1}), 45.0, 1e-12);
  EXPECT_NEAR(*folded_angle_degrees(Vec64{1, 0}, Vec64{-1, 1}), 45.0, 1e-12);
}

TEST(FoldedAngle, DegenerateIsUndefined) {
  EXPECT_FALSE(folded_angle_degrees(Vec64{0, 0}, Vec64{1, 1}).has_value());
  EXPECT_FALSE(folded_angle_degrees(Vec64{1, 1}, Vec64{1e-31, 0}).has_value());
  EXPECT_THROW(folded_angle_degrees(Vec64{1}, Vec64{1, 2}), ContractViolation);
}

TEST(FoldedAngle, AgreesWithArccosAwayFromTheEnds) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto u = oracle::random_vector(9, s);
    const auto v = oracle::random_vector(9, s + 1000);
    const double a = *folded_angle_degrees(u, v);
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 90.0);
    EXPECT_NEAR(a, oracle::folded_angle_acos(u, v), 1e-9);
  }
}

TEST(FoldedAngle, ResolvesTinyAngles) {
  // arccos of a clamped cosine cannot see below ~1e-6 degrees.
  const double eps = 1e-12;
  const double a = *folded_angle_degrees(Vec64{1, 0}, Vec64{1, eps});
  EXPECT_NEAR(a, eps * 180.0 / 3.14159265358979323846, 1e-20);
}

TEST(Projection, ExactMultipleAndOrthogonal) {
  EXPECT_DOUBLE_EQ(*projection_scalar(Vec64{2, 4}, Vec64{1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(*projection_scalar(Vec64{1, 0}, Vec64{0, 1}), 0.0);
  EXPECT_FALSE(projection_scalar(Vec64{1, 0}, Vec64{0, 0}).has_value());
}

TEST(Projection, MatchesGridSearch) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto u = oracle::random_vector(6, s);
    const auto v = oracle::random_vector(6, s + 77);
    EXPECT_NEAR(*projection_scalar(u, v), oracle::grid_projection(u, v), 1e-9);
  }
}

TEST(SingularValues, Diagonal) {
  const auto p = top_two_singular_values(Mat64::from_rows({{3, 0}, {0, 2}}));
  EXPECT_NEAR(p.sigma1, 3.0, 1e-10);
  EXPECT_NEAR(p.sigma2, 2.0, 1e-10);
}

TEST(SingularValues, RankOneOuterProduct) {
  const auto p = top_two_singular_values(Mat64::outer(Vec64{1, 2}, Vec64{3, 4}));
  EXPECT_NEAR(p.sigma1, 5.0 * std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(p.sigma1, 11.1803398875, 1e-10);
  EXPECT_LE(p.sigma2 / p.sigma1, 1e-14);
}

TEST(SingularValues, LargeRankOneHasNoSqrtEpsFloor) {
  const auto u = oracle::random_vector(60, 1);
  const auto v = oracle::random_vector(300, 2);
  for (const auto& m : {Mat64::outer(u, v), Mat64::outer(v, u)}) {
    const auto p = top_two_singular_values(m);
    EXPECT_NEAR(p.sigma1, norm(u) * norm(v), 1e-12 * p.sigma1);
    EXPECT_LE(p.sigma2 / p.sigma1, 1e-14);
  }
}

TEST(SingularValues, TwoRowsOfOppositeSign) {
  const auto a = oracle::random_vector(128, 5);
  Vec64 e;
  for (double x : a) e.push_back(0.4 * x);
  for (double x : a) e.push_back(-0.4 * x);
  const auto p = top_two_singular_values(Mat64(2, 128, e));
  EXPECT_LE(p.sigma2 / p.sigma1, 1e-14);
}

TEST(SingularValues, MatchesGramEigendecomposition) {
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const auto m = oracle::random_matrix(5, 4, s);
    const auto ref = oracle::gram_singular_values(m);
    const auto p = top_two_singular_values(m);
    EXPECT_NEAR(p.sigma1 / ref[0], 1.0, 1e-8);
    EXPECT_NEAR(p.sigma2 / ref[1], 1.0, 1e-8);
  }
}

TEST(SingularValues, TallAndWideAgree) {
  const auto m = oracle::random_matrix(9, 30, 8);
  const auto a = top_two_singular_values(m);
  const auto b = top_two_singular_values(m.transpose());
  EXPECT_NEAR(a.sigma1, b.sigma1, 1e-9 * a.sigma1);
  EXPECT_NEAR(a.sigma2, b.sigma2, 1e-9 * a.sigma1);
}

TEST(SingularValues, ZeroAndVectorShapes) {
  const auto z = top_two_singular_values(Mat64(4, 3));
  EXPECT_EQ(z.sigma1, 0.0);
  EXPECT_EQ(z.sigma2, 0.0);
  const auto r = top_two_singular_values(Mat64::from_rows({{3, 4}}));
  EXPECT_DOUBLE_EQ(r.sigma1, 5.0);
  EXPECT_EQ(r.sigma2, 0.0);
}
