/// \file projgmres/accelerated.hpp
/// \brief Restart drivers with Look-Back correction, buffered projection, and
/// both combined.

#ifndef PROJGMRES_ACCELERATED_HPP
#define PROJGMRES_ACCELERATED_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>

#include "projgmres/config.hpp"
#include "projgmres/gmres.hpp"
#include "projgmres/lookback.hpp"
#include "projgmres/projection.hpp"

namespace projgmres {

namespace detail {

template <std::floating_point T>
struct Corrected {
  Vector<T> x;
  Vector<T> r;
  T norm;
  /// u Δx, or zeros for a trivial step.
  Vector<T> y;
};

/// Moves x to x + u Δx with the residual-minimizing u. A missing or zero
/// direction leaves x, r and the norm untouched.
template <std::floating_point T>
Corrected<T> apply_lookback(const SparseMatrix<T>& A, std::span<const T> b,
                            Vector<T> x, Vector<T> r, T norm,
                            const std::optional<Vector<T>>& delta, std::size_t t,
                            const SolverObserver<T>* obs) {
  Corrected<T> out{std::move(x), std::move(r), norm, Vector<T>(b.size(), T(0))};
  T u = 0;
  if (delta) {
    const Vector<T> a_delta = spmv<T>(A, *delta);
    u = lookback_coefficient(out.r, a_delta);
  }
  bool applied = false;
  if (u != T(0)) {
    Vector<T> y = *delta;
    scale_inplace<T>(u, y);
    Vector<T> x_new = axpy(T(1), y, out.x);
    Vector<T> r_new = residual<T>(A, b, x_new);
    const T n_new = norm2(r_new);
    if (n_new <= norm) {
      out.x = std::move(x_new);
      out.r = std::move(r_new);
      out.norm = n_new;
      out.y = std::move(y);
      applied = true;
    }
  }
  if (obs && obs->on_lookback)
    obs->on_lookback({t, !applied, applied ? u : T(0), norm, out.norm});
  return out;
}

template <std::floating_point T>
void notify_projection(const SolverObserver<T>* obs, std::size_t t,
                       const ProjectionResult<T>& p, T cycle_norm,
                       const CorrectionBuffer<T>& buf) {
  if (obs && obs->on_projection)
    obs->on_projection({t, p.r, p.residual_norm, cycle_norm, buf.az_slots(),
                        p.coeffs, p.rank, p.kept_incumbent});
}

}  // namespace detail

/// Restarted GMRES(m) with the Look-Back correction of depth cfg.d.
template <std::floating_point T>
SolveResult<T> run_lbgmres(const SparseMatrix<T>& A,
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
  LookBackState<T> state(cfg.d);
  Vector<T> r(b.begin(), b.end());
  for (std::size_t t = 1; t <= cfg.max_restarts; ++t) {
    CycleResult<T> c = gmres_cycle<T>(A, b, out.x, r, cfg.m, loop.breakdown_tol(), obs, t);
    state.record(t, out.x, c.x);
    auto lb = detail::apply_lookback<T>(A, b, std::move(c.x), std::move(c.r),
                                        c.residual_norm, lookback_delta(state, t), t, obs);
    out.x = std::move(lb.x);
    r = std::move(lb.r);
    if (loop.record(out.history, t, lb.norm)) break;
  }
  return out;
}

namespace detail {

/// Buffered projection driver; `with_lookback` adds the d = 3 correction
/// after each projection.
template <std::floating_point T>
SolveResult<T> run_buffered(const SparseMatrix<T>& A, std::span<const T> b,
                            const SolverConfig& cfg, bool with_lookback,
                            const SolverObserver<T>* obs) {
  RestartLoop<T> loop(A, b, cfg);
  SolveResult<T> out;
  out.x.assign(A.n_cols(), T(0));
  if (loop.b_norm() == T(0)) {
    out.history.converged = true;
    return out;
  }
  CorrectionBuffer<T> buf(cfg.l);
  Vector<T> r(b.begin(), b.end());
  Vector<T> z_prev;
  Vector<T> y_cur(b.size(), T(0));
  for (std::size_t t = 1; t <= cfg.max_restarts; ++t) {
    CycleResult<T> c = gmres_cycle<T>(A, b, out.x, r, cfg.m, loop.breakdown_tol(), obs, t);
    buf.insert(A, c.z, t);

    Vector<T> x_next;
    Vector<T> r_next;
    T norm = c.residual_norm;
    if (t >= cfg.l) {
      const std::size_t slot = CorrectionBuffer<T>::slot_for(t, cfg.l);
      ProjectionResult<T> p = project_accelerate<T>(
          A, b, out.x, r, buf,
          Incumbent<T>{c.x, c.r, c.residual_norm, slot});
      notify_projection(obs, t, p, c.residual_norm, buf);
      x_next = std::move(p.x);
      r_next = std::move(p.r);
      norm = p.residual_norm;
    } else {
      x_next = std::move(c.x);
      r_next = std::move(c.r);
    }

    if (with_lookback) {
      std::optional<Vector<T>> delta;
      if (t >= 2) delta = lookback_delta_d3(z_prev, y_cur, c.z);
      auto lb = apply_lookback<T>(A, b, std::move(x_next), std::move(r_next), norm,
                                  delta, t, obs);
      x_next = std::move(lb.x);
      r_next = std::move(lb.r);
      norm = lb.norm;
      y_cur = std::move(lb.y);
      z_prev = std::move(c.z);
    }

    out.x = std::move(x_next);
    r = std::move(r_next);
    if (loop.record(out.history, t, norm)) break;
  }
  return out;
}

}  // namespace detail

/// GMRES(m) whose restarts, once t >= l, continue from the best point in
/// x0^(t) + span(R).
template <std::floating_point T>
SolveResult<T> run_lgmres(const SparseMatrix<T>& A,
                          std::type_identity_t<std::span<const T>> b,
                          const SolverConfig& cfg,
                          const SolverObserver<T>* obs = nullptr) {
  return detail::run_buffered<T>(A, b, cfg, false, obs);
}

/// run_lgmres plus the d = 3 Look-Back correction on every restart point.
template <std::floating_point T>
SolveResult<T> run_llbgmres(const SparseMatrix<T>& A,
                            std::type_identity_t<std::span<const T>> b,
                            const SolverConfig& cfg,
                            const SolverObserver<T>* obs = nullptr) {
  if (cfg.d != 3) throw std::invalid_argument("llbgmres requires d = 3");
  return detail::run_buffered<T>(A, b, cfg, true, obs);
}

/// Dispatches on cfg.method.
template <std::floating_point T>
SolveResult<T> solve(const SparseMatrix<T>& A,
                     std::type_identity_t<std::span<const T>> b,
                     const SolverConfig& cfg,
                     const SolverObserver<T>* obs = nullptr) {
  switch (cfg.method) {
    case Method::gmres: return run_gmres<T>(A, b, cfg, obs);
    case Method::lbgmres: return run_lbgmres<T>(A, b, cfg, obs);
    case Method::lgmres: return run_lgmres<T>(A, b, cfg, obs);
    case Method::llbgmres: return run_llbgmres<T>(A, b, cfg, obs);
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace projgmres

#endif  // PROJGMRES_ACCELERATED_HPP
