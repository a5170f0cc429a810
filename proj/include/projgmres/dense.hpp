/// \file projgmres/dense.hpp
/// \brief Small dense matrices and the least-squares kernels built on them.

#ifndef PROJGMRES_DENSE_HPP
#define PROJGMRES_DENSE_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "projgmres/sparse.hpp"

namespace projgmres {

/// Column-major dense matrix.
template <std::floating_point T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[j * rows_ + i];
  }

  std::span<T> column(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const T> column(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }

  /// Leading rows x cols block.
  DenseMatrix block(std::size_t rows, std::size_t cols) const {
    DenseMatrix out(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t i = 0; i < rows; ++i) out(i, j) = (*this)(i, j);
    return out;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Plane rotation [c s; -s c] that maps (a, b) to (r, 0).
template <std::floating_point T>
struct Givens {
  T c = 1;
  T s = 0;

  static Givens make(T a, T b) {
    if (b == T(0)) return {a < T(0) ? T(-1) : T(1), T(0)};
    const T r = std::hypot(a, b);
    return {a / r, b / r};
  }

  void apply(T& x, T& y) const {
    const T tx = c * x + s * y;
    y = -s * x + c * y;
    x = tx;
  }
};

template <std::floating_point T>
struct LeastSquaresSolution {
  std::vector<T> coeffs;
  /// Columns kept after truncation.
  std::size_t rank = 0;
  /// ||rhs - M coeffs|| as predicted by the factorization.
  T residual_norm = 0;
};

/// \brief Minimizes ||rhs - M y||_2 over y for an n x f matrix given by
/// columns, using Householder QR with column pivoting.
///
/// Factorization stops once a pivot's diagonal falls below
/// `rel_tol * |R(0,0)|`; the coefficients of the dropped columns are zero.
template <std::floating_point T>
LeastSquaresSolution<T> pivoted_qr_least_squares(
    const std::vector<std::span<const T>>& columns, std::span<const T> rhs,
    T rel_tol) {
  const std::size_t f = columns.size();
  const std::size_t n = rhs.size();
  LeastSquaresSolution<T> out;
  out.coeffs.assign(f, T(0));
  if (f == 0) {
    out.residual_norm = norm2(rhs);
    return out;
  }

  DenseMatrix<T> M(n, f);
  for (std::size_t j = 0; j < f; ++j) {
    detail::require_same_length(columns[j].size(), n, "least squares column");
    std::copy(columns[j].begin(), columns[j].end(), M.column(j).begin());
  }
  std::vector<T> qtb(rhs.begin(), rhs.end());
  std::vector<std::size_t> perm(f);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<T> v(n);

  const std::size_t steps = std::min(n, f);
  T r00 = 0;
  std::size_t rank = 0;
  for (std::size_t k = 0; k < steps; ++k) {
    // pivot: largest trailing column norm
    std::size_t p = k;
    T best = -1;
    for (std::size_t j = k; j < f; ++j) {
      const T nj = norm2(M.column(j).subspan(k));
      if (nj > best) {
        best = nj;
        p = j;
      }
    }
    if (p != k) {
      std::swap_ranges(M.column(k).begin(), M.column(k).end(), M.column(p).begin());
      std::swap(perm[k], perm[p]);
    }
    if (k == 0) r00 = best;
    if (best == T(0) || best <= rel_tol * r00) break;

    // Householder reflector for M(k:n, k)
    auto col = M.column(k);
    const T alpha = col[k] >= T(0) ? -best : best;
    std::fill(v.begin(), v.end(), T(0));
    for (std::size_t i = k; i < n; ++i) v[i] = col[i];
    v[k] -= alpha;
    const T vnorm2 = [&] {
      T s = 0;
      for (std::size_t i = k; i < n; ++i) s += v[i] * v[i];
      return s;
    }();
    auto reflect = [&](std::span<T> x) {
      if (vnorm2 == T(0)) return;
      T s = 0;
      for (std::size_t i = k; i < n; ++i) s += v[i] * x[i];
      s = T(2) * s / vnorm2;
      for (std::size_t i = k; i < n; ++i) x[i] -= s * v[i];
    };
    for (std::size_t j = k + 1; j < f; ++j) reflect(M.column(j));
    reflect(qtb);
    col[k] = alpha;
    for (std::size_t i = k + 1; i < n; ++i) col[i] = T(0);
    ++rank;
  }

  std::vector<T> y(rank);
  for (std::size_t ii = rank; ii-- > 0;) {
    T s = qtb[ii];
    for (std::size_t j = ii + 1; j < rank; ++j) s -= M(ii, j) * y[j];
    y[ii] = s / M(ii, ii);
  }
  for (std::size_t k = 0; k < rank; ++k) out.coeffs[perm[k]] = y[k];
  out.rank = rank;
  out.residual_norm = norm2(std::span<const T>(qtb).subspan(rank));
  return out;
}

}  // namespace projgmres

#endif  // PROJGMRES_DENSE_HPP
