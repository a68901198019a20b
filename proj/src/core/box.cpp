#include "sdcbf/types.hpp"

#include "sdcbf/errors.hpp"

#include <cmath>

namespace sdcbf {

Box::Box(Vector lower, Vector upper) : lo(std::move(lower)), hi(std::move(upper)) {
  if (lo.size() != hi.size()) {
    throw DimensionError("box bounds have different dimensions");
  }
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (!(lo[i] <= hi[i])) {
      throw ConfigError("box is empty in coordinate " + std::to_string(i));
    }
  }
}

bool Box::contains(const Vector& v, double tol) const {
  if (v.size() != lo.size()) return false;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] < lo[i] - tol || v[i] > hi[i] + tol) return false;
  }
  return true;
}

Vector Box::clamp(const Vector& v) const { return v.cwiseMax(lo).cwiseMin(hi); }

Vector Box::max_abs_vertex() const {
  Vector out(lo.size());
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    out[i] = std::abs(lo[i]) >= std::abs(hi[i]) ? lo[i] : hi[i];
  }
  return out;
}

Vector Box::farthest_vertex(const Vector& from) const {
  Vector out(lo.size());
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    out[i] = std::abs(from[i] - lo[i]) >= std::abs(hi[i] - from[i]) ? lo[i] : hi[i];
  }
  return out;
}

double Box::max_distance_from(const Vector& from) const {
  return (farthest_vertex(from) - from).norm();
}

void require_dim(const Vector& v, std::size_t expected, const char* what) {
  if (static_cast<std::size_t>(v.size()) != expected) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                         ", got " + std::to_string(v.size()));
  }
}

}  // namespace sdcbf
