#include "sdcbf/qp.hpp"

#include "sdcbf/errors.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace sdcbf {

namespace {

constexpr double kFeasTol = 1e-9;

std::optional<Vector> solve_scalar(double r, const Box& box, const std::optional<HalfSpace>& hs) {
  double lo = box.lo[0];
  double hi = box.hi[0];
  if (hs) {
    const double a = hs->a[0];
    if (a > 0.0) {
      lo = std::max(lo, hs->b / a);
    } else if (a < 0.0) {
      hi = std::min(hi, hs->b / a);
    } else if (hs->b > 0.0) {
      return std::nullopt;
    }
  }
  if (lo > hi) return std::nullopt;
  (void)r;  // r > 0: the minimiser of r u^2 on [lo, hi] is the point closest to 0
  Vector u(1);
  u[0] = std::min(std::max(0.0, lo), hi);
  return u;
}

}  // namespace

std::optional<Vector> solve_small_qp(const Matrix& cost, const Box& box,
                                     const std::optional<HalfSpace>& half_space) {
  const std::size_t m = box.dim();
  if (static_cast<std::size_t>(cost.rows()) != m || static_cast<std::size_t>(cost.cols()) != m) {
    throw DimensionError("QP cost matrix does not match the input box");
  }
  if (half_space) require_dim(half_space->a, m, "QP half-space");
  if (m == 1) return solve_scalar(cost(0, 0), box, half_space);
  if (m > kMaxEnumeratedInputs) throw DimensionError("QP active-set enumeration limited to m <= 8");

  const auto mi = static_cast<Eigen::Index>(m);
  std::size_t combos = 1;
  for (std::size_t i = 0; i < m; ++i) combos *= 3;

  std::optional<Vector> best;
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<int> state(m);
  for (int hs_active = 0; hs_active <= (half_space ? 1 : 0); ++hs_active) {
    for (std::size_t code = 0; code < combos; ++code) {
      std::size_t c = code;
      Eigen::Index n_eq = hs_active;
      for (std::size_t i = 0; i < m; ++i) {
        state[i] = static_cast<int>(c % 3);
        c /= 3;
        if (state[i] != 0) ++n_eq;
      }
      Matrix kkt = Matrix::Zero(mi + n_eq, mi + n_eq);
      Vector rhs = Vector::Zero(mi + n_eq);
      kkt.topLeftCorner(mi, mi) = 2.0 * cost;
      Eigen::Index row = mi;
      for (std::size_t i = 0; i < m; ++i) {
        if (state[i] == 0) continue;
        const auto ii = static_cast<Eigen::Index>(i);
        kkt(row, ii) = 1.0;
        kkt(ii, row) = 1.0;
        rhs[row] = state[i] == 1 ? box.lo[ii] : box.hi[ii];
        ++row;
      }
      if (hs_active) {
        kkt.block(row, 0, 1, mi) = half_space->a.transpose();
        kkt.block(0, row, mi, 1) = half_space->a;
        rhs[row] = half_space->b;
      }
      Eigen::FullPivLU<Matrix> lu(kkt);
      if (!lu.isInvertible()) continue;
      const Vector sol = lu.solve(rhs);
      const Vector u = sol.head(mi);
      if (!box.contains(u, kFeasTol)) continue;
      if (half_space && half_space->a.dot(u) < half_space->b - kFeasTol) continue;
      const double value = u.dot(cost * u);
      if (value < best_cost) {
        best_cost = value;
        best = box.clamp(u);
      }
    }
  }
  return best;
}

}  // namespace sdcbf
