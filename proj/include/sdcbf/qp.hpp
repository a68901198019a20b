#pragma once

#include "sdcbf/types.hpp"

#include <optional>

namespace sdcbf {

/// a . u >= b
struct HalfSpace {
  Vector a;
  double b = 0.0;
};

/// min u' R u  s.t.  u in box  (and a . u >= b when a half-space is given).
///
/// m = 1 is solved in closed form. For small m the active sets (each
/// coordinate free / at lo / at hi, half-space active or not) are enumerated
/// and the cheapest feasible stationary point is returned; with R positive
/// definite that point is the global optimum. Returns nullopt when the
/// feasible set is empty. Throws DimensionError for m > kMaxEnumeratedInputs.
std::optional<Vector> solve_small_qp(const Matrix& cost, const Box& box,
                                     const std::optional<HalfSpace>& half_space);

inline constexpr std::size_t kMaxEnumeratedInputs = 8;

}  // namespace sdcbf
