/// \file projgmres/sparse.hpp
/// \brief Dense vector kernels and compressed-sparse-row matrix storage.

#ifndef PROJGMRES_SPARSE_HPP
#define PROJGMRES_SPARSE_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numeric>
#include <ranges>
#include <type_traits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace projgmres {

/// Raised by kernels whose operands disagree in length.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <std::floating_point T>
using Vector = std::vector<T>;

namespace detail {

inline void require_same_length(std::size_t a, std::size_t b,
                                const char* what) {
  if (a != b)
    throw DimensionError(std::string(what) + ": length mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) +
                         ")");
}

}  // namespace detail

/// One (row, col, value) coordinate entry, 0-based.
template <std::floating_point T>
struct Triplet {
  std::size_t row;
  std::size_t col;
  T value;
};

/// \brief Immutable CSR matrix.
///
/// Rows hold strictly increasing column indices. Explicit zeros are kept.
template <std::floating_point T>
class SparseMatrix {
 public:
  using value_type = T;
  using size_type = std::size_t;

  SparseMatrix() = default;

  /// Takes ownership of raw CSR arrays after validating every invariant.
  SparseMatrix(size_type n_rows, size_type n_cols,
               std::vector<size_type> row_offsets,
               std::vector<size_type> col_indices, std::vector<T> values)
      : n_rows_(n_rows),
        n_cols_(n_cols),
        row_offsets_(std::move(row_offsets)),
        col_indices_(std::move(col_indices)),
        values_(std::move(values)) {
    validate();
  }

  /// Assembles CSR from coordinates in any order; duplicates are summed.
  static SparseMatrix from_triplets(size_type n_rows, size_type n_cols,
                                    std::vector<Triplet<T>> entries) {
    for (const auto& e : entries) {
      if (e.row >= n_rows || e.col >= n_cols)
        throw std::out_of_range("triplet (" + std::to_string(e.row) + ", " +
                                std::to_string(e.col) +
                                ") outside matrix bounds");
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Triplet<T>& a, const Triplet<T>& b) {
                       return a.row != b.row ? a.row < b.row : a.col < b.col;
                     });

    std::vector<size_type> offsets(n_rows + 1, 0);
    std::vector<size_type> cols;
    std::vector<T> vals;
    cols.reserve(entries.size());
    vals.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const auto& e = entries[k];
      if (k > 0 && entries[k - 1].row == e.row && entries[k - 1].col == e.col) {
        vals.back() += e.value;
        continue;
      }
      cols.push_back(e.col);
      vals.push_back(e.value);
      ++offsets[e.row + 1];
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    return SparseMatrix(n_rows, n_cols, std::move(offsets), std::move(cols),
                        std::move(vals));
  }

  static SparseMatrix identity(size_type n) {
    std::vector<Triplet<T>> e;
    e.reserve(n);
    for (size_type i = 0; i < n; ++i) e.push_back({i, i, T(1)});
    return from_triplets(n, n, std::move(e));
  }

  static SparseMatrix diagonal(std::span<const T> d) {
    std::vector<Triplet<T>> e;
    e.reserve(d.size());
    for (size_type i = 0; i < d.size(); ++i) e.push_back({i, i, d[i]});
    return from_triplets(d.size(), d.size(), std::move(e));
  }

  size_type n_rows() const noexcept { return n_rows_; }
  size_type n_cols() const noexcept { return n_cols_; }
  size_type nnz() const noexcept { return values_.size(); }
  bool is_square() const noexcept { return n_rows_ == n_cols_; }

  std::span<const size_type> row_offsets() const noexcept {
    return row_offsets_;
  }
  std::span<const size_type> col_indices() const noexcept {
    return col_indices_;
  }
  std::span<const T> values() const noexcept { return values_; }

  /// Entry lookup by binary search within the row; absent entries read 0.
  T at(size_type i, size_type j) const {
    if (i >= n_rows_ || j >= n_cols_) throw std::out_of_range("SparseMatrix::at");
    auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
    auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return T(0);
    return values_[static_cast<size_type>(it - col_indices_.begin())];
  }

  T frobenius_norm() const {
    T s = 0;
    for (T v : values_) s += v * v;
    return std::sqrt(s);
  }

  SparseMatrix transpose() const {
    std::vector<Triplet<T>> e;
    e.reserve(nnz());
    for (size_type i = 0; i < n_rows_; ++i)
      for (size_type k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
        e.push_back({col_indices_[k], i, values_[k]});
    return from_triplets(n_cols_, n_rows_, std::move(e));
  }

  /// Row-major dense copy, for small oracles and diagnostics.
  std::vector<T> to_dense() const {
    std::vector<T> d(n_rows_ * n_cols_, T(0));
    for (size_type i = 0; i < n_rows_; ++i)
      for (size_type k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
        d[i * n_cols_ + col_indices_[k]] = values_[k];
    return d;
  }

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  void validate() const {
    if (row_offsets_.size() != n_rows_ + 1)
      throw std::invalid_argument("row_offsets must have n_rows + 1 entries");
    if (row_offsets_.front() != 0)
      throw std::invalid_argument("row_offsets[0] must be 0");
    if (row_offsets_.back() != values_.size() ||
        col_indices_.size() != values_.size())
      throw std::invalid_argument("row_offsets, col_indices and values disagree");
    for (size_type i = 0; i < n_rows_; ++i) {
      if (row_offsets_[i] > row_offsets_[i + 1])
        throw std::invalid_argument("row_offsets must be non-decreasing");
      for (size_type k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
        if (col_indices_[k] >= n_cols_)
          throw std::invalid_argument("column index out of range");
        if (k > row_offsets_[i] && col_indices_[k] <= col_indices_[k - 1])
          throw std::invalid_argument(
              "column indices must be strictly increasing within a row");
      }
    }
  }

  size_type n_rows_ = 0;
  size_type n_cols_ = 0;
  std::vector<size_type> row_offsets_{0};
  std::vector<size_type> col_indices_;
  std::vector<T> values_;
};

// Kernels -------------------------------------------------------------------

/// Contiguous range of reals: std::vector, std::span, std::array.
template <class R>
concept RealRange = std::ranges::contiguous_range<R> &&
                    std::floating_point<std::ranges::range_value_t<R>>;

template <RealRange R>
auto as_span(const R& r) {
  return std::span<const std::ranges::range_value_t<R>>(std::ranges::data(r),
                                                         std::ranges::size(r));
}

/// y = A x, written into a caller-provided buffer.
template <std::floating_point T>
void spmv(const SparseMatrix<T>& A, std::type_identity_t<std::span<const T>> x,
          std::type_identity_t<std::span<T>> y) {
  detail::require_same_length(A.n_cols(), x.size(), "spmv");
  detail::require_same_length(A.n_rows(), y.size(), "spmv");
  const auto offs = A.row_offsets();
  const auto cols = A.col_indices();
  const auto vals = A.values();
  for (std::size_t i = 0; i < A.n_rows(); ++i) {
    T s = 0;
    for (std::size_t k = offs[i]; k < offs[i + 1]; ++k) s += vals[k] * x[cols[k]];
    y[i] = s;
  }
}

template <std::floating_point T>
Vector<T> spmv(const SparseMatrix<T>& A,
               std::type_identity_t<std::span<const T>> x) {
  Vector<T> y(A.n_rows());
  spmv<T>(A, x, y);
  return y;
}

template <RealRange U, RealRange V>
auto dot(const U& u, const V& v) {
  using T = std::ranges::range_value_t<U>;
  const auto a = as_span(u);
  const auto b = as_span(v);
  detail::require_same_length(a.size(), b.size(), "dot");
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Euclidean norm, scaled so that large or tiny entries neither overflow nor
/// flush to zero.
template <RealRange R>
auto norm2(const R& r) {
  using T = std::ranges::range_value_t<R>;
  const auto v = as_span(r);
  T scale = 0;
  for (T a : v) scale = std::max(scale, std::abs(a));
  if (scale == T(0)) return T(0);
  T s = 0;
  for (T a : v) {
    const T q = a / scale;
    s += q * q;
  }
  return scale * std::sqrt(s);
}

/// Returns alpha x + y.
template <RealRange X, RealRange Y>
auto axpy(std::ranges::range_value_t<X> alpha, const X& x, const Y& y) {
  using T = std::ranges::range_value_t<X>;
  detail::require_same_length(std::ranges::size(x), std::ranges::size(y), "axpy");
  Vector<T> out(std::ranges::begin(y), std::ranges::end(y));
  const auto xs = as_span(x);
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] += alpha * xs[i];
  return out;
}

/// y += alpha x in place.
template <std::floating_point T>
void axpy_inplace(T alpha, std::type_identity_t<std::span<const T>> x,
                  std::type_identity_t<std::span<T>> y) {
  detail::require_same_length(x.size(), y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

template <std::floating_point T>
void scale_inplace(T alpha, std::type_identity_t<std::span<T>> x) {
  for (T& a : x) a *= alpha;
}

/// b - A x.
template <std::floating_point T>
Vector<T> residual(const SparseMatrix<T>& A,
                   std::type_identity_t<std::span<const T>> b,
                   std::type_identity_t<std::span<const T>> x) {
  detail::require_same_length(A.n_rows(), b.size(), "residual");
  Vector<T> r = spmv(A, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return r;
}

}  // namespace projgmres

#endif  // PROJGMRES_SPARSE_HPP
