#include "sdcbf/barrier.hpp"

#include "sdcbf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sdcbf {

BarrierSpec make_linear_alpha_barrier(std::function<double(const Vector&)> h,
                                      std::function<Vector(const Vector&)> grad_h, double l_h,
                                      double kappa, AlphaLipschitzMode mode) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be > 0");
  if (!(l_h > 0.0) || !std::isfinite(l_h)) throw ConfigError("l_h must be > 0");
  BarrierSpec b;
  b.h = std::move(h);
  b.grad_h = std::move(grad_h);
  b.l_h = l_h;
  b.alpha = [kappa](double v) { return kappa * v; };
  b.l_alpha_eff = mode == AlphaLipschitzMode::kComposite ? kappa * l_h : kappa;
  return b;
}

BarrierSpec make_quadratic_bound_barrier(std::size_t component, double radius,
                                         const Box& operating_box, double kappa,
                                         AlphaLipschitzMode mode) {
  if (component >= operating_box.dim()) {
    throw ConfigError("barrier component outside the state dimension");
  }
  if (!(radius > 0.0)) throw ConfigError("barrier radius must be > 0");
  const auto c = static_cast<Eigen::Index>(component);
  const double reach = std::max(std::abs(operating_box.lo[c]), std::abs(operating_box.hi[c]));
  const double r2 = radius * radius;
  auto b = make_linear_alpha_barrier([c, r2](const Vector& x) { return r2 - x[c] * x[c]; },
                                     [c](const Vector& x) {
                                       Vector g = Vector::Zero(x.size());
                                       g[c] = -2.0 * x[c];
                                       return g;
                                     },
                                     2.0 * reach, kappa, mode);
  b.boundary_distance = [c, radius](const Vector& x) { return radius - std::abs(x[c]); };
  return b;
}

BarrierCheck check_barrier(const BarrierSpec& barrier, const Box& operating_box,
                           std::size_t samples, std::uint64_t seed) {
  BarrierCheck out;
  if (barrier.alpha(0.0) != 0.0) out.alpha_ok = false;
  double prev = barrier.alpha(-1.0);
  for (int i = -99; i <= 100; ++i) {
    const double v = barrier.alpha(i / 100.0);
    if (!(v > prev)) out.alpha_ok = false;
    prev = v;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x(operating_box.dim());
  for (std::size_t k = 0; k < samples; ++k) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x[i] = operating_box.lo[i] + unit(rng) * (operating_box.hi[i] - operating_box.lo[i]);
    }
    const double g = barrier.grad_h(x).norm();
    if (g > out.max_grad_norm) out.max_grad_norm = g;
    if (g > barrier.l_h && out.gradient_ok) {
      out.gradient_ok = false;
      out.gradient_witness = x;
    }
  }
  return out;
}

}  // namespace sdcbf
