#include "sdcbf/plant.hpp"

#include "sdcbf/errors.hpp"

#include <algorithm>

namespace sdcbf {

Vector ControlAffinePlant::rate(const Vector& x, const Vector& u) const { return f(x) + g(x) * u; }

Vector DcMotor::f(const Vector& x) const {
  Vector out(2);
  out << -39.3153 * x[0] + 19.1083, -1.6599 * x[1] - 3.3333;
  return out;
}

Matrix DcMotor::g(const Vector& x) const {
  Matrix out(2, 1);
  out << -32.2293 * x[1], 22.9478 * x[0];
  return out;
}

Vector DcMotor::rate(const Vector& x, const Vector& u) const {
  Vector out(2);
  out << -39.3153 * x[0] + 19.1083 - 32.2293 * x[1] * u[0],
      -1.6599 * x[1] - 3.3333 + 22.9478 * x[0] * u[0];
  return out;
}

AffinePlant::AffinePlant(Matrix a, Vector c, Matrix b)
    : a_(std::move(a)), c_(std::move(c)), b_(std::move(b)) {
  if (a_.rows() != a_.cols() || c_.size() != a_.rows() || b_.rows() != a_.rows()) {
    throw DimensionError("affine plant matrices are inconsistent");
  }
}

Vector AffinePlant::f(const Vector& x) const { return a_ * x + c_; }

Matrix AffinePlant::g(const Vector&) const { return b_; }

std::unique_ptr<ControlAffinePlant> make_plant(const std::string& name) {
  if (name == "dc_motor") return std::make_unique<DcMotor>();
  throw ConfigError("unknown plant '" + name + "'");
}

namespace {

// Calls fn(point) for every point of a regular grid over the box.
template <class Fn>
void for_each_grid_point(const Box& box, std::size_t per_axis, Fn&& fn) {
  const auto dim = static_cast<Eigen::Index>(box.dim());
  std::vector<std::size_t> idx(box.dim(), 0);
  Vector p(dim);
  const std::size_t steps = std::max<std::size_t>(per_axis, 2) - 1;
  while (true) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double frac = static_cast<double>(idx[i]) / static_cast<double>(steps);
      p[i] = box.lo[i] + frac * (box.hi[i] - box.lo[i]);
    }
    fn(p);
    Eigen::Index k = 0;
    while (k < dim && ++idx[k] > steps) {
      idx[k] = 0;
      ++k;
    }
    if (k == dim) break;
  }
}

}  // namespace

PlantSuprema grid_suprema(const ControlAffinePlant& plant, const Box& operating_box,
                          const Box& input_box, std::size_t points_per_axis) {
  PlantSuprema out;
  for_each_grid_point(operating_box, points_per_axis, [&](const Vector& x) {
    const Vector fx = plant.f(x);
    const Matrix gx = plant.g(x);
    const double gn = gx.cols() == 1 ? gx.col(0).norm()
                                     : Eigen::JacobiSVD<Matrix>(gx).singularValues()(0);
    out.g_sup = std::max(out.g_sup, gn);
    for_each_grid_point(input_box, points_per_axis, [&](const Vector& u) {
      out.beta_norm = std::max(out.beta_norm, (fx + gx * u).norm());
    });
  });
  return out;
}

}  // namespace sdcbf
