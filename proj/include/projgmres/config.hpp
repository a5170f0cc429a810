/// \file projgmres/config.hpp
/// \brief Solver configuration, convergence history and per-restart hooks.

#ifndef PROJGMRES_CONFIG_HPP
#define PROJGMRES_CONFIG_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "projgmres/arnoldi.hpp"

namespace projgmres {

enum class Method { gmres, lbgmres, lgmres, llbgmres };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::gmres: return "gmres";
    case Method::lbgmres: return "lbgmres";
    case Method::lgmres: return "lgmres";
    case Method::llbgmres: return "llbgmres";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view s) {
  if (s == "gmres") return Method::gmres;
  if (s == "lbgmres") return Method::lbgmres;
  if (s == "lgmres") return Method::lgmres;
  if (s == "llbgmres") return Method::llbgmres;
  return std::nullopt;
}

struct SolverConfig {
  Method method = Method::gmres;
  /// Arnoldi steps per restart cycle.
  std::size_t m = 30;
  /// Width of the correction buffer.
  std::size_t l = 10;
  /// Look-back depth; the combined method always uses 3.
  std::size_t d = 3;
  /// Stop once ||b - A x|| / ||b|| <= tol.
  double tol = 1e-8;
  std::size_t max_restarts = 1000;

  void validate() const {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    if (l < 1) throw std::invalid_argument("l must be >= 1");
    if (d < 2) throw std::invalid_argument("d must be >= 2");
    if (!(tol > 0)) throw std::invalid_argument("tol must be > 0");
    if (max_restarts < 1) throw std::invalid_argument("max_restarts must be >= 1");
  }
};

struct HistoryEntry {
  std::size_t restart_index;
  double relative_residual;
  /// Seconds since the solve started.
  double elapsed;
};

struct ConvergenceHistory {
  std::vector<HistoryEntry> entries;
  bool converged = false;
  std::size_t total_restarts = 0;
};

template <std::floating_point T>
struct SolveResult {
  Vector<T> x;
  ConvergenceHistory history;
};

/// Emitted after every projection step of the buffered methods.
template <std::floating_point T>
struct ProjectionEvent {
  std::size_t restart;
  /// b - A x_acc, recomputed.
  std::span<const T> residual;
  T accelerated_norm;
  /// Residual norm of the cycle's own iterate before projection.
  T cycle_norm;
  /// Cached A z columns the residual was projected against.
  std::span<const Vector<T>> az_columns;
  std::span<const T> coeffs;
  std::size_t rank;
  /// The cycle iterate was kept because the minimizer did not beat it.
  bool kept_incumbent;
};

/// Emitted after every look-back correction (including the trivial ones).
template <std::floating_point T>
struct LookBackEvent {
  std::size_t restart;
  /// True when no correction was applied (t = 1, no history, or zero delta).
  bool trivial;
  T coefficient;
  T uncorrected_norm;
  T corrected_norm;
};

/// Optional callbacks; unset members are skipped.
template <std::floating_point T>
struct SolverObserver {
  std::function<void(std::size_t restart, const ArnoldiResult<T>&)> on_arnoldi;
  std::function<void(const ProjectionEvent<T>&)> on_projection;
  std::function<void(const LookBackEvent<T>&)> on_lookback;
};

namespace detail {

template <std::floating_point T>
void notify_arnoldi(const SolverObserver<T>* obs, std::size_t t,
                    const ArnoldiResult<T>& ar) {
  if (obs && obs->on_arnoldi) obs->on_arnoldi(t, ar);
}

}  // namespace detail

}  // namespace projgmres

#endif  // PROJGMRES_CONFIG_HPP
