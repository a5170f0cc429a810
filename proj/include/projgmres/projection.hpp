/// \file projgmres/projection.hpp
/// \brief Correction buffer of restart increments and the residual projection
/// over their span.
///
/// After each restart t the cycle increment z^(t) goes into slot
/// k = t mod l (slot l when k = 0), together with A z^(t). The projection
/// step then minimizes ||r_base - (A R) y||_2 over y, where R holds the
/// buffered increments and r_base is the residual of the point the current
/// cycle started from. Since the newest increment is in R, the cycle's own
/// iterate is feasible and the projected residual can only be smaller.

#ifndef PROJGMRES_PROJECTION_HPP
#define PROJGMRES_PROJECTION_HPP

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "projgmres/dense.hpp"
#include "projgmres/sparse.hpp"

namespace projgmres {

/// Diagonal ratio below which a direction of A R is dropped.
inline constexpr double kProjectionRankTol = 1e-12;

/// Points closer than this many units of roundoff (relative to the
/// incumbent's norm) count as the same point.
inline constexpr int kSamePointUlps = 4;

template <std::floating_point T>
class CorrectionBuffer {
 public:
  explicit CorrectionBuffer(std::size_t width) : z_(width), az_(width) {
    if (width == 0) throw std::invalid_argument("CorrectionBuffer: width must be >= 1");
  }

  /// 1-based slot receiving the increment of restart t >= 1.
  static std::size_t slot_for(std::size_t t, std::size_t width) {
    const std::size_t k = t % width;
    return k == 0 ? width : k;
  }

  std::size_t width() const noexcept { return z_.size(); }
  std::size_t filled() const noexcept { return filled_; }
  bool full() const noexcept { return filled_ == width(); }

  /// Stores z and A z in slot_for(t); returns that slot.
  std::size_t insert(const SparseMatrix<T>& A,
                     std::type_identity_t<std::span<const T>> z, std::size_t t) {
    detail::require_same_length(A.n_cols(), z.size(), "buffer_insert");
    if (t == 0) throw std::invalid_argument("buffer_insert: restart index starts at 1");
    const std::size_t slot = slot_for(t, width());
    auto& zs = z_[slot - 1];
    if (zs.empty()) ++filled_;
    zs.assign(z.begin(), z.end());
    az_[slot - 1] = spmv(A, z);
    return slot;
  }

  bool occupied(std::size_t slot) const { return !z_.at(slot - 1).empty(); }

  /// Slot contents, 1-based. Unoccupied slots are empty vectors.
  const Vector<T>& z(std::size_t slot) const { return z_.at(slot - 1); }
  const Vector<T>& az(std::size_t slot) const { return az_.at(slot - 1); }

  /// All slots in order, including empty ones.
  std::span<const Vector<T>> z_slots() const noexcept { return z_; }
  std::span<const Vector<T>> az_slots() const noexcept { return az_; }

 private:
  std::vector<Vector<T>> z_;
  std::vector<Vector<T>> az_;
  std::size_t filled_ = 0;
};

template <std::floating_point T>
std::size_t buffer_insert(CorrectionBuffer<T>& buf,
                          std::type_identity_t<std::span<const T>> z,
                          const SparseMatrix<T>& A, std::size_t t) {
  return buf.insert(A, z, t);
}

template <std::floating_point T>
struct ProjectionResult {
  Vector<T> x;
  /// b - A x, recomputed.
  Vector<T> r;
  T residual_norm = 0;
  /// One coefficient per slot (0 for empty or truncated slots).
  std::vector<T> coeffs;
  std::size_t rank = 0;
  /// True when the incumbent beat the computed minimizer.
  bool kept_incumbent = false;
};

/// A point of base_x + span(R) the caller already holds, typically the
/// cycle iterate base_x + z(slot).
template <std::floating_point T>
struct Incumbent {
  std::span<const T> x;
  std::span<const T> r;
  T residual_norm;
  std::size_t slot;
};

namespace detail {

template <std::floating_point T>
bool same_point(std::span<const T> a, std::span<const T> b, T rel) {
  return norm2(axpy(T(-1), a, b)) <= rel * norm2(b);
}

}  // namespace detail

/// Minimizes the residual over base_x + span(R), given r_base = b - A base_x.
///
/// The least-squares problem is solved, then solved again against the
/// recomputed residual of the first answer. With an incumbent the sweeps start
/// from it instead of base_x, and the incumbent is returned unchanged if the
/// sweeps do not beat it or only move it by a few ulps.
template <std::floating_point T>
ProjectionResult<T> project_accelerate(
    const SparseMatrix<T>& A, std::type_identity_t<std::span<const T>> b,
    std::type_identity_t<std::span<const T>> base_x,
    std::type_identity_t<std::span<const T>> r_base,
    const CorrectionBuffer<T>& buf,
    const std::optional<Incumbent<T>>& incumbent = std::nullopt) {
  if (buf.filled() == 0)
    throw std::invalid_argument("project_accelerate: empty correction buffer");
  detail::require_same_length(A.n_cols(), base_x.size(), "project_accelerate");
  detail::require_same_length(A.n_rows(), r_base.size(), "project_accelerate");
  if (incumbent && !buf.occupied(incumbent->slot))
    throw std::invalid_argument("project_accelerate: incumbent slot is empty");

  std::vector<std::size_t> slots;
  std::vector<std::span<const T>> cols;
  for (std::size_t s = 1; s <= buf.width(); ++s) {
    if (!buf.occupied(s)) continue;
    slots.push_back(s);
    cols.emplace_back(buf.az(s));
  }
  const T rank_tol = static_cast<T>(kProjectionRankTol);
  const T eps = std::numeric_limits<T>::epsilon();

  ProjectionResult<T> out;
  out.coeffs.assign(buf.width(), T(0));
  std::span<const T> rhs = r_base;
  if (incumbent) {
    out.x.assign(incumbent->x.begin(), incumbent->x.end());
    out.coeffs[incumbent->slot - 1] = T(1);
    rhs = incumbent->r;
  } else {
    out.x.assign(base_x.begin(), base_x.end());
  }
  for (int sweep = 0; sweep < 2; ++sweep) {
    const auto ls = pivoted_qr_least_squares<T>(cols, rhs, rank_tol);
    if (sweep == 0) out.rank = ls.rank;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (ls.coeffs[i] == T(0)) continue;
      out.coeffs[slots[i] - 1] += ls.coeffs[i];
      axpy_inplace<T>(ls.coeffs[i], buf.z(slots[i]), out.x);
    }
    out.r = residual<T>(A, b, out.x);
    rhs = out.r;
  }
  out.residual_norm = norm2(out.r);

  if (incumbent && (incumbent->residual_norm <= out.residual_norm ||
                    detail::same_point<T>(out.x, incumbent->x, kSamePointUlps * eps))) {
    out.x.assign(incumbent->x.begin(), incumbent->x.end());
    out.r.assign(incumbent->r.begin(), incumbent->r.end());
    out.residual_norm = incumbent->residual_norm;
    std::fill(out.coeffs.begin(), out.coeffs.end(), T(0));
    out.coeffs[incumbent->slot - 1] = T(1);
    out.kept_incumbent = true;
  }
  return out;
}

template <std::floating_point T>
ProjectionResult<T> project_accelerate(
    const SparseMatrix<T>& A, std::type_identity_t<std::span<const T>> b,
    std::type_identity_t<std::span<const T>> base_x,
    const CorrectionBuffer<T>& buf) {
  const Vector<T> r_base = residual<T>(A, b, base_x);
  return project_accelerate<T>(A, b, base_x, r_base, buf);
}

}  // namespace projgmres

#endif  // PROJGMRES_PROJECTION_HPP
