/// \file projgmres/lookback.hpp
/// \brief Look-Back restart correction.
///
/// After restart t the next initial guess is x^(t) + u Δx, where Δx is the
/// change of the iterate relative to an earlier restart t_d and u minimizes
/// ||r^(t) - u A Δx||_2. With lag = d/2 (d even) or (d-1)/2 (d odd),
/// t_d = t - lag and
///
///   early restarts (t = d = 2):  Δx = x^(t) - x0^(t_d)
///   d even:                      Δx = x^(t) - x^(t_d)
///   d odd:                       Δx = x^(t) - x0^(t_d)
///
/// No correction is applied while t_d < 1. For d = 3 the odd rule reduces to
/// Δx = z^(t-1) + y^(t) + z^(t), which the combined driver uses directly.

#ifndef PROJGMRES_LOOKBACK_HPP
#define PROJGMRES_LOOKBACK_HPP

#include <cstddef>
#include <deque>
#include <optional>
#include <stdexcept>

#include "projgmres/sparse.hpp"

namespace projgmres {

template <std::floating_point T>
class LookBackState {
 public:
  explicit LookBackState(std::size_t d) : d_(d) {
    if (d < 2) throw std::invalid_argument("LookBackState: d must be >= 2");
  }

  std::size_t d() const noexcept { return d_; }
  /// t - t_d
  std::size_t lag() const noexcept { return d_ % 2 == 0 ? d_ / 2 : (d_ - 1) / 2; }
  /// Restarts retained: ceil(d/2) + 1.
  std::size_t ring_depth() const noexcept { return (d_ + 1) / 2 + 1; }

  /// Stores x0^(t) and x^(t). Restarts must be recorded in increasing order.
  void record(std::size_t t, std::type_identity_t<std::span<const T>> x0,
              std::type_identity_t<std::span<const T>> x) {
    if (!ring_.empty() && t <= ring_.back().t)
      throw std::invalid_argument("LookBackState: restarts must increase");
    ring_.push_back({t, Vector<T>(x0.begin(), x0.end()), Vector<T>(x.begin(), x.end())});
    while (ring_.size() > ring_depth()) ring_.pop_front();
  }

  const Vector<T>& initial_guess(std::size_t t) const { return find(t).x0; }
  const Vector<T>& iterate(std::size_t t) const { return find(t).x; }
  bool has(std::size_t t) const {
    for (const auto& e : ring_)
      if (e.t == t) return true;
    return false;
  }

 private:
  struct Entry {
    std::size_t t;
    Vector<T> x0;
    Vector<T> x;
  };

  const Entry& find(std::size_t t) const {
    for (const auto& e : ring_)
      if (e.t == t) return e;
    throw std::out_of_range("LookBackState: restart " + std::to_string(t) +
                            " is not retained");
  }

  std::size_t d_;
  std::deque<Entry> ring_;
};

/// Δx^(t) from the recorded history, or nullopt when no correction applies
/// (t = 1 or t_d < 1). Restart t must already be recorded.
template <std::floating_point T>
std::optional<Vector<T>> lookback_delta(const LookBackState<T>& state,
                                        std::size_t t) {
  const std::size_t d = state.d();
  const std::size_t lag = state.lag();
  if (t < 2 || t <= lag) return std::nullopt;
  const std::size_t td = t - lag;
  const bool even = d % 2 == 0;
  const Vector<T>& xt = state.iterate(t);
  const Vector<T>& ref = (t == 2 && d == 2) || !even ? state.initial_guess(td)
                                                      : state.iterate(td);
  return axpy(T(-1), ref, xt);
}

/// The d = 3 form z^(t-1) + y^(t) + z^(t).
template <RealRange R1, RealRange R2, RealRange R3>
auto lookback_delta_d3(const R1& z_prev, const R2& y_t, const R3& z_t) {
  auto out = axpy(std::ranges::range_value_t<R1>(1), z_prev, y_t);
  axpy_inplace<std::ranges::range_value_t<R1>>(1, as_span(z_t), out);
  return out;
}

/// argmin_u ||r - u A Δx||_2; zero when A Δx = 0.
template <RealRange R1, RealRange R2>
auto lookback_coefficient(const R1& r, const R2& a_delta) {
  using T = std::ranges::range_value_t<R1>;
  const T denom = dot(a_delta, a_delta);
  if (!(denom > T(0))) return T(0);
  return dot(a_delta, r) / denom;
}

}  // namespace projgmres

#endif  // PROJGMRES_LOOKBACK_HPP
