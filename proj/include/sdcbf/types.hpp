#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>

namespace sdcbf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Axis-aligned box {v : lo <= v <= hi}. Used for the input set U and for the
/// operating region over which the Lipschitz suprema are declared.
struct Box {
  Vector lo;
  Vector hi;

  Box() = default;
  Box(Vector lower, Vector upper);

  std::size_t dim() const { return static_cast<std::size_t>(lo.size()); }
  bool contains(const Vector& v, double tol = 0.0) const;
  Vector clamp(const Vector& v) const;
  Vector center() const { return 0.5 * (lo + hi); }

  /// Vertex maximizing |v_s| in every coordinate.
  Vector max_abs_vertex() const;

  /// max over v in the box of ||v - from||_2 (attained at a vertex).
  double max_distance_from(const Vector& from) const;

  /// Vertex attaining max_distance_from.
  Vector farthest_vertex(const Vector& from) const;
};

void require_dim(const Vector& v, std::size_t expected, const char* what);

}  // namespace sdcbf
