/// \file projgmres/gmres.hpp
/// \brief One GMRES(m) restart cycle and the plain restarted driver.

#ifndef PROJGMRES_GMRES_HPP
#define PROJGMRES_GMRES_HPP

#include <chrono>
#include <cstddef>
#include <stdexcept>

#include "projgmres/arnoldi.hpp"
#include "projgmres/config.hpp"
#include "projgmres/sparse.hpp"

namespace projgmres {

template <std::floating_point T>
struct CycleResult {
  /// Increment z = V_k s found by this cycle.
  Vector<T> z;
  /// x0 + z
  Vector<T> x;
  /// b - A x, recomputed explicitly.
  Vector<T> r;
  T residual_norm = 0;
  /// Minimum of the Hessenberg least-squares problem.
  T predicted_residual = 0;
  std::size_t steps = 0;
  bool breakdown = false;
};

/// Cycle from x0 given its residual r0 = b - A x0 (must be nonzero).
template <std::floating_point T>
CycleResult<T> gmres_cycle(const SparseMatrix<T>& A,
                           std::type_identity_t<std::span<const T>> b,
                           std::type_identity_t<std::span<const T>> x0,
                           std::type_identity_t<std::span<const T>> r0,
                           std::size_t m, T breakdown_tol,
                           const SolverObserver<T>* obs = nullptr,
                           std::size_t restart = 0) {
  const ArnoldiResult<T> ar = arnoldi<T>(A, r0, m, breakdown_tol);
  detail::notify_arnoldi(obs, restart, ar);
  const HessenbergSolution<T> ls = solve_hessenberg_lsq(ar.hessenberg, ar.beta);

  CycleResult<T> out;
  out.steps = ar.steps();
  out.breakdown = ar.breakdown;
  out.predicted_residual = ls.predicted_residual;
  out.z.assign(x0.size(), T(0));
  for (std::size_t j = 0; j < ls.s.size(); ++j)
    axpy_inplace<T>(ls.s[j], ar.basis[j], out.z);
  out.x.assign(x0.begin(), x0.end());
  axpy_inplace<T>(T(1), out.z, out.x);
  out.r = residual<T>(A, b, out.x);
  out.residual_norm = norm2(out.r);
  return out;
}

template <std::floating_point T>
CycleResult<T> gmres_cycle(const SparseMatrix<T>& A,
                           std::type_identity_t<std::span<const T>> b,
                           std::type_identity_t<std::span<const T>> x0,
                           std::size_t m) {
  if (!A.is_square()) throw DimensionError("gmres_cycle: matrix must be square");
  detail::require_same_length(A.n_rows(), b.size(), "gmres_cycle");
  detail::require_same_length(A.n_cols(), x0.size(), "gmres_cycle");
  const Vector<T> r0 = residual<T>(A, b, x0);
  return gmres_cycle<T>(A, b, x0, r0, m,
                        static_cast<T>(kBreakdownFactor) * A.frobenius_norm());
}

namespace detail {

/// Shared bookkeeping for every restart driver.
template <std::floating_point T>
class RestartLoop {
 public:
  RestartLoop(const SparseMatrix<T>& A, std::span<const T> b,
              const SolverConfig& cfg)
      : cfg_(cfg), start_(std::chrono::steady_clock::now()) {
    cfg.validate();
    if (!A.is_square()) throw DimensionError("solver: matrix must be square");
    require_same_length(A.n_rows(), b.size(), "solver");
    b_norm_ = norm2(b);
    breakdown_tol_ = static_cast<T>(kBreakdownFactor) * A.frobenius_norm();
  }

  T b_norm() const { return b_norm_; }
  T breakdown_tol() const { return breakdown_tol_; }

  /// Appends a history row; returns true once converged.
  bool record(ConvergenceHistory& h, std::size_t t, T residual_norm) const {
    const double rel = static_cast<double>(residual_norm / b_norm_);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
    h.entries.push_back({t, rel, dt.count()});
    h.total_restarts = t;
    h.converged = rel <= cfg_.tol;
    return h.converged;
  }

 private:
  const SolverConfig& cfg_;
  std::chrono::steady_clock::time_point start_;
  T b_norm_ = 0;
  T breakdown_tol_ = 0;
};

}  // namespace detail

/// Restarted GMRES(m) from x0 = 0.
template <std::floating_point T>
SolveResult<T> run_gmres(const SparseMatrix<T>& A,
                         std::type_identity_t<std::span<const T>> b,
                         const SolverConfig& cfg,
                         const SolverObserver<T>* obs = nullptr) {
  detail::RestartLoop<T> loop(A, b, cfg);
  SolveResult<T> out;
  out.x.assign(A.n_cols(), T(0));
  if (loop.b_norm() == T(0)) {
    out.history.converged = true;
    return out;
  }
  Vector<T> r(b.begin(), b.end());
  for (std::size_t t = 1; t <= cfg.max_restarts; ++t) {
    CycleResult<T> c =
        gmres_cycle<T>(A, b, out.x, r, cfg.m, loop.breakdown_tol(), obs, t);
    out.x = std::move(c.x);
    r = std::move(c.r);
    if (loop.record(out.history, t, c.residual_norm)) break;
  }
  return out;
}

}  // namespace projgmres

#endif  // PROJGMRES_GMRES_HPP
