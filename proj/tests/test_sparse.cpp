#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "projgmres/sparse.hpp"
#include "test_support.hpp"

using namespace projgmres;
namespace ts = testing_support;

TEST(Spmv, IdentityReturnsInput) {
  const auto I = SparseMatrix<double>::identity(3);
  const std::vector<double> x{1, 2, 3};
  EXPECT_EQ(spmv<double>(I, x), x);
}

TEST(Spmv, Diagonal) {
  const std::vector<double> d{2, 3};
  const auto A = SparseMatrix<double>::diagonal(d);
  const std::vector<double> x{1, 1};
  EXPECT_EQ(spmv<double>(A, x), (std::vector<double>{2, 3}));
}

TEST(Spmv, FiveByFiveMatchesDense) {
  const auto A = SparseMatrix<double>::from_triplets(
      5, 5,
      {{0, 0, 1.5}, {0, 4, -2.0}, {1, 1, 3.0}, {2, 0, 0.5}, {2, 3, 4.0},
       {3, 3, -1.0}, {4, 2, 2.5}, {4, 4, 1.0}});
  const std::vector<double> x{1, -1, 2, 0.5, 3};
  const auto y = spmv<double>(A, x);
  const auto ref = ts::dense_matvec(ts::to_dense(A), x);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(y[i], ref[i]);
  EXPECT_DOUBLE_EQ(y[0], 1.5 - 6.0);
  EXPECT_DOUBLE_EQ(y[2], 0.5 + 2.0);
}

TEST(Spmv, RandomAgainstDenseOracle) {
  std::mt19937_64 rng(7);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 1 + rng() % 50;
    const auto A = ts::random_diag_dominant(n, std::min<std::size_t>(4, n - 1), 0.5, seed);
    const auto x = ts::random_vector(n, seed + 100);
    const auto y = spmv<double>(A, x);
    const auto ref = ts::dense_matvec(ts::to_dense(A), x);
    EXPECT_LE(ts::max_abs_diff(y, ref), 1e-12 * A.frobenius_norm() * ts::plain_norm(x));
  }
}

TEST(Spmv, WritesIntoBuffer) {
  const auto A = SparseMatrix<double>::from_triplets(2, 3, {{0, 2, 1.0}, {1, 0, 2.0}});
  std::vector<double> y(2, -7.0);
  spmv<double>(A, std::vector<double>{1, 2, 3}, y);
  EXPECT_EQ(y, (std::vector<double>{3, 2}));
}

TEST(Spmv, DimensionMismatchThrows) {
  const auto I = SparseMatrix<double>::identity(3);
  EXPECT_THROW(spmv<double>(I, std::vector<double>{1, 2}), DimensionError);
}

TEST(Dot, Basics) {
  EXPECT_EQ(dot(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 0.0);
  EXPECT_EQ(dot(std::vector<double>{1, 1}, std::vector<double>{1, 1}), 2.0);
  EXPECT_THROW(dot(std::vector<double>{1}, std::vector<double>{1, 2}), DimensionError);
}

TEST(Dot, MatchesCompensatedSum) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(10), b(10);
    for (auto& v : a) v = u(rng);
    for (auto& v : b) v = u(rng);
    const double ref = ts::compensated_dot(a, b);
    EXPECT_NEAR(dot(a, b), ref, 1e-14 * ref);
  }
}

TEST(Norm2, Values) {
  EXPECT_EQ(norm2(std::vector<double>{3, 4}), 5.0);
  EXPECT_EQ(norm2(std::vector<double>{0, 0, 0}), 0.0);
  EXPECT_EQ(norm2(std::vector<double>{}), 0.0);
}

TEST(Norm2, NoOverflowOrUnderflow) {
  EXPECT_DOUBLE_EQ(norm2(std::vector<double>{3e200, 4e200}), 5e200);
  EXPECT_DOUBLE_EQ(norm2(std::vector<double>{3e-200, 4e-200}), 5e-200);
}

TEST(Norm2, IsSqrtOfSelfDot) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto v = ts::random_vector(1 + seed * 7, seed);
    EXPECT_NEAR(norm2(v), std::sqrt(ts::compensated_dot(v, v)), 1e-12 * norm2(v));
  }
}

TEST(Axpy, Values) {
  EXPECT_EQ(axpy(2.0, std::vector<double>{1, 1}, std::vector<double>{0, 1}),
            (std::vector<double>{2, 3}));
  EXPECT_EQ(axpy(0.0, std::vector<double>{5, 5}, std::vector<double>{1, 2}),
            (std::vector<double>{1, 2}));
  EXPECT_THROW(axpy(1.0, std::vector<double>{1}, std::vector<double>{1, 2}), DimensionError);
}

TEST(Axpy, MatchesScalarLoop) {
  const auto x = ts::random_vector(37, 1);
  const auto y = ts::random_vector(37, 2);
  const auto out = axpy(-0.75, x, y);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(out[i], y[i] + -0.75 * x[i]);
}

TEST(Csr, FromTripletsSortsAndSumsDuplicates) {
  const auto A = SparseMatrix<double>::from_triplets(
      3, 3, {{2, 1, 1.0}, {0, 2, 4.0}, {0, 0, 1.0}, {2, 1, 2.5}, {1, 1, -1.0}});
  EXPECT_EQ(A.nnz(), 4u);
  EXPECT_EQ(A.at(2, 1), 3.5);
  EXPECT_EQ(A.at(0, 1), 0.0);
  const std::vector<std::size_t> offs(A.row_offsets().begin(), A.row_offsets().end());
  const std::vector<std::size_t> cols(A.col_indices().begin(), A.col_indices().end());
  EXPECT_EQ(offs, (std::vector<std::size_t>{0, 2, 3, 4}));
  EXPECT_EQ(cols, (std::vector<std::size_t>{0, 2, 1, 1}));
}

TEST(Csr, EmptyRowsAllowed) {
  const auto A = SparseMatrix<double>::from_triplets(4, 4, {{3, 0, 1.0}});
  EXPECT_EQ(A.nnz(), 1u);
  EXPECT_EQ(spmv<double>(A, std::vector<double>{2, 0, 0, 0}),
            (std::vector<double>{0, 0, 0, 2}));
}

TEST(Csr, InvalidArraysRejected) {
  using M = SparseMatrix<double>;
  // offsets not starting at zero
  EXPECT_ANY_THROW(M(2, 2, {1, 1, 2}, {0, 1}, {1.0, 1.0}));
  // decreasing offsets
  EXPECT_ANY_THROW(M(2, 2, {0, 2, 1}, {0, 1}, {1.0, 1.0}));
  // unsorted columns within a row
  EXPECT_ANY_THROW(M(1, 2, {0, 2}, {1, 0}, {1.0, 1.0}));
  // column out of range
  EXPECT_ANY_THROW(M(1, 2, {0, 1}, {2}, {1.0}));
  // size mismatch between columns and values
  EXPECT_ANY_THROW(M(1, 2, {0, 1}, {0}, {1.0, 2.0}));
  EXPECT_NO_THROW(M(1, 2, {0, 2}, {0, 1}, {1.0, 2.0}));
}

TEST(Csr, TripletOutOfBoundsRejected) {
  EXPECT_THROW(SparseMatrix<double>::from_triplets(2, 2, {{2, 0, 1.0}}), std::out_of_range);
}

TEST(Csr, FrobeniusAndTranspose) {
  const auto A = SparseMatrix<double>::from_triplets(2, 3, {{0, 1, 3.0}, {1, 2, 4.0}});
  EXPECT_DOUBLE_EQ(A.frobenius_norm(), 5.0);
  const auto At = A.transpose();
  EXPECT_EQ(At.n_rows(), 3u);
  EXPECT_EQ(At.at(1, 0), 3.0);
  EXPECT_EQ(At.at(2, 1), 4.0);
  EXPECT_EQ(At.transpose(), A);
}

TEST(Residual, IsBMinusAx) {
  const std::vector<double> d{2, 3};
  const auto A = SparseMatrix<double>::diagonal(d);
  EXPECT_EQ(residual<double>(A, std::vector<double>{2, 3}, std::vector<double>{1, 0}),
            (std::vector<double>{0, 3}));
}
