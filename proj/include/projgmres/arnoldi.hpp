/// \file projgmres/arnoldi.hpp
/// \brief Modified Gram-Schmidt Arnoldi and the Hessenberg least-squares solve.

#ifndef PROJGMRES_ARNOLDI_HPP
#define PROJGMRES_ARNOLDI_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "projgmres/dense.hpp"
#include "projgmres/sparse.hpp"

namespace projgmres {

/// Thrown when the rotated Hessenberg triangle has an exactly zero pivot.
class NumericalBreakdown : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relative factor on ||A||_F below which h(j+1,j) counts as zero.
inline constexpr double kBreakdownFactor = 1e-14;

template <std::floating_point T>
struct ArnoldiResult {
  /// Orthonormal basis. Holds steps()+1 vectors, or steps() after breakdown.
  std::vector<Vector<T>> basis;
  /// (steps()+1) x steps() upper Hessenberg matrix.
  DenseMatrix<T> hessenberg;
  T beta = 0;
  bool breakdown = false;

  std::size_t steps() const noexcept { return hessenberg.cols(); }
};

/// Runs at most m Arnoldi steps from r0 with single-pass modified
/// Gram-Schmidt. Stops early (breakdown = true) once h(j+1,j) <=
/// breakdown_tol; the subdiagonal entry is then stored as 0 and no further
/// basis vector is formed. The same happens after n steps on an n x n
/// matrix.
template <std::floating_point T>
ArnoldiResult<T> arnoldi(const SparseMatrix<T>& A, std::type_identity_t<std::span<const T>> r0,
                         std::size_t m, T breakdown_tol) {
  if (m == 0) throw std::invalid_argument("arnoldi: m must be >= 1");
  detail::require_same_length(A.n_cols(), r0.size(), "arnoldi");
  const T beta = norm2(r0);
  if (!(beta > T(0))) throw std::invalid_argument("arnoldi: zero start vector");

  ArnoldiResult<T> out;
  out.beta = beta;
  out.basis.reserve(m + 1);
  out.basis.emplace_back(r0.begin(), r0.end());
  scale_inplace<T>(T(1) / beta, out.basis.front());

  m = std::min(m, A.n_rows());
  DenseMatrix<T> H(m + 1, m);
  std::size_t k = 0;
  for (std::size_t j = 0; j < m; ++j) {
    Vector<T> w = spmv(A, out.basis[j]);
    for (std::size_t i = 0; i <= j; ++i) {
      H(i, j) = dot(w, out.basis[i]);
      axpy_inplace<T>(-H(i, j), out.basis[i], w);
    }
    const T h = norm2(w);
    k = j + 1;
    if (h <= breakdown_tol || k == A.n_rows()) {
      H(j + 1, j) = T(0);
      out.breakdown = true;
      break;
    }
    H(j + 1, j) = h;
    scale_inplace<T>(T(1) / h, w);
    out.basis.push_back(std::move(w));
  }
  out.hessenberg = H.block(k + 1, k);
  return out;
}

template <std::floating_point T>
ArnoldiResult<T> arnoldi(const SparseMatrix<T>& A, std::type_identity_t<std::span<const T>> r0,
                         std::size_t m) {
  return arnoldi<T>(A, r0, m, static_cast<T>(kBreakdownFactor) * A.frobenius_norm());
}

template <std::floating_point T>
struct HessenbergSolution {
  std::vector<T> s;
  T predicted_residual = 0;
};

/// Minimizes ||beta e1 - H s||_2 for a (k+1) x k Hessenberg H by Givens
/// rotations.
template <std::floating_point T>
HessenbergSolution<T> solve_hessenberg_lsq(const DenseMatrix<T>& H, T beta) {
  const std::size_t k = H.cols();
  if (k == 0) throw std::invalid_argument("solve_hessenberg_lsq: empty H");
  if (H.rows() != k + 1)
    throw DimensionError("solve_hessenberg_lsq: H must be (k+1) x k");

  DenseMatrix<T> R = H;
  std::vector<T> g(k + 1, T(0));
  g[0] = beta;
  std::vector<Givens<T>> rot(k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < j; ++i) rot[i].apply(R(i, j), R(i + 1, j));
    rot[j] = Givens<T>::make(R(j, j), R(j + 1, j));
    rot[j].apply(R(j, j), R(j + 1, j));
    rot[j].apply(g[j], g[j + 1]);
    if (R(j, j) == T(0))
      throw NumericalBreakdown("solve_hessenberg_lsq: singular column " +
                               std::to_string(j));
  }

  HessenbergSolution<T> out;
  out.s.assign(k, T(0));
  for (std::size_t i = k; i-- > 0;) {
    T acc = g[i];
    for (std::size_t j = i + 1; j < k; ++j) acc -= R(i, j) * out.s[j];
    out.s[i] = acc / R(i, i);
  }
  out.predicted_residual = std::abs(g[k]);
  return out;
}

/// Orthogonality and Arnoldi-relation defects of one cycle.
template <std::floating_point T>
struct ArnoldiHealth {
  /// max |V^T V - I|
  T orthogonality = 0;
  /// ||A V_k - V_{k+1} H||_F
  T relation = 0;
};

template <std::floating_point T>
ArnoldiHealth<T> arnoldi_health(const SparseMatrix<T>& A,
                                const ArnoldiResult<T>& ar) {
  ArnoldiHealth<T> h;
  const auto& V = ar.basis;
  for (std::size_t i = 0; i < V.size(); ++i)
    for (std::size_t j = i; j < V.size(); ++j) {
      const T want = i == j ? T(1) : T(0);
      h.orthogonality = std::max(h.orthogonality, std::abs(dot(V[i], V[j]) - want));
    }
  const std::size_t k = ar.steps();
  const std::size_t used_rows = std::min(V.size(), k + 1);
  T fro = 0;
  for (std::size_t j = 0; j < k; ++j) {
    Vector<T> d = spmv(A, V[j]);
    for (std::size_t i = 0; i < used_rows && i <= j + 1; ++i)
      axpy_inplace<T>(-ar.hessenberg(i, j), V[i], d);
    for (T a : d) fro += a * a;
  }
  h.relation = std::sqrt(fro);
  return h;
}

}  // namespace projgmres

#endif  // PROJGMRES_ARNOLDI_HPP
