/// \file projgmres/bench.hpp
/// \brief Right-hand-side construction, benchmark runs and their reports.

#ifndef PROJGMRES_BENCH_HPP
#define PROJGMRES_BENCH_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "projgmres/accelerated.hpp"
#include "projgmres/matrix_market.hpp"

namespace projgmres {

enum class RhsKind { ones, a_times_ones, file };

struct RhsMode {
  RhsKind kind = RhsKind::a_times_ones;
  std::string path;  ///< only for RhsKind::file

  /// Accepts "ones", "a-times-ones" (or "a_times_ones") and "file=<path>".
  static RhsMode parse(std::string_view s) {
    if (s == "ones") return {RhsKind::ones, {}};
    if (s == "a-times-ones" || s == "a_times_ones") return {RhsKind::a_times_ones, {}};
    if (s.starts_with("file=") && s.size() > 5)
      return {RhsKind::file, std::string(s.substr(5))};
    throw std::invalid_argument("unknown rhs mode '" + std::string(s) + "'");
  }
};

/// Reads one value per line; blank lines are ignored.
template <std::floating_point T = double>
Vector<T> read_vector(std::istream& in, std::size_t expected) {
  Vector<T> v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (mm::detail::is_skippable(line)) continue;
    const auto toks = mm::detail::split_ws(line);
    if (toks.size() != 1)
      throw mm::ValueError("expected one value per line", lineno);
    v.push_back(mm::detail::parse_value<T>(toks[0], lineno));
  }
  if (v.size() != expected)
    throw DimensionError("rhs file has " + std::to_string(v.size()) +
                         " values, matrix has " + std::to_string(expected) + " rows");
  return v;
}

template <std::floating_point T>
Vector<T> build_rhs(const SparseMatrix<T>& A, const RhsMode& mode) {
  switch (mode.kind) {
    case RhsKind::ones:
      return Vector<T>(A.n_rows(), T(1));
    case RhsKind::a_times_ones: {
      const Vector<T> ones(A.n_cols(), T(1));
      return spmv<T>(A, ones);
    }
    case RhsKind::file: {
      std::ifstream in(mode.path);
      if (!in) throw std::runtime_error(mode.path + ": cannot open file");
      try {
        return read_vector<T>(in, A.n_rows());
      } catch (const mm::ValueError& e) {
        throw mm::ValueError(mode.path + ": " + e.what(), 0);
      }
    }
  }
  throw std::invalid_argument("unknown rhs mode");
}

struct BenchReport {
  std::string matrix_name;
  std::size_t n = 0;
  std::size_t nnz = 0;
  std::string method;
  std::size_t restarts = 0;
  double t_total = 0;
  double t_restart = 0;
  bool converged = false;
  double final_relative_residual = 0;
  /// ||x - 1||_inf when the exact solution is known (a-times-ones).
  std::optional<double> max_error;

  /// Restart count, or the cap marker when the run did not converge.
  std::string iter() const { return converged ? std::to_string(restarts) : "†"; }
};

template <std::floating_point T>
struct BenchRun {
  BenchReport report;
  SolveResult<T> result;
};

/// Solves from x0 = 0 and times the solve alone.
template <std::floating_point T>
BenchRun<T> run_benchmark(const SparseMatrix<T>& A, const std::string& name,
                          const SolverConfig& cfg, const RhsMode& rhs,
                          const SolverObserver<T>* obs = nullptr) {
  const Vector<T> b = build_rhs(A, rhs);
  const auto t0 = std::chrono::steady_clock::now();
  SolveResult<T> res = solve<T>(A, b, cfg, obs);
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;

  BenchReport rep;
  rep.matrix_name = name;
  rep.n = A.n_rows();
  rep.nnz = A.nnz();
  rep.method = std::string(to_string(cfg.method));
  rep.restarts = res.history.total_restarts;
  rep.t_total = dt.count();
  rep.t_restart = rep.restarts ? rep.t_total / static_cast<double>(rep.restarts) : 0.0;
  rep.converged = res.history.converged;
  rep.final_relative_residual =
      res.history.entries.empty() ? 0.0 : res.history.entries.back().relative_residual;
  if (rhs.kind == RhsKind::a_times_ones) {
    double e = 0;
    for (T v : res.x) e = std::max(e, std::abs(static_cast<double>(v) - 1.0));
    rep.max_error = e;
  }
  return {std::move(rep), std::move(res)};
}

inline void write_history_csv(std::ostream& out, const ConvergenceHistory& h) {
  out << "restart,relative_residual,elapsed_seconds\n";
  char buf[96];
  for (const auto& e : h.entries) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.6g\n", e.restart_index,
                  e.relative_residual, e.elapsed);
    out << buf;
  }
}

/// One summary line; times with 3 significant digits.
inline std::string format_summary(const BenchReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "matrix=%s n=%zu nnz=%zu method=%s iter=%s t_total=%.2e "
                "t_restart=%.2e converged=%s rel_res=%.3e",
                r.matrix_name.c_str(), r.n, r.nnz, r.method.c_str(), r.iter().c_str(),
                r.t_total, r.t_restart, r.converged ? "yes" : "no",
                r.final_relative_residual);
  std::string s = buf;
  if (r.max_error) {
    std::snprintf(buf, sizeof buf, " max_err=%.3e", *r.max_error);
    s += buf;
  }
  return s;
}

}  // namespace projgmres

#endif  // PROJGMRES_BENCH_HPP
