#pragma once

#include "sdcbf/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace sdcbf {

/// Selects the Lipschitz constant applied to |alpha(h(x)) - alpha(h(x'))|.
///  - kComposite: kappa * l_h, the constant of alpha o h with respect to x.
///  - kStrict:    kappa alone, i.e. the constant of alpha with respect to h.
enum class AlphaLipschitzMode { kComposite, kStrict };

/// Safe set C = {x : h(x) >= 0} together with the class-K function alpha.
struct BarrierSpec {
  std::function<double(const Vector&)> h;
  std::function<Vector(const Vector&)> grad_h;
  double l_h = 0.0;
  std::function<double(double)> alpha;
  double l_alpha_eff = 0.0;
  /// Euclidean distance to the boundary of C, when known in closed form.
  std::function<double(const Vector&)> boundary_distance;
};

/// alpha(h) = kappa * h with a user-provided h.
BarrierSpec make_linear_alpha_barrier(std::function<double(const Vector&)> h,
                                      std::function<Vector(const Vector&)> grad_h, double l_h,
                                      double kappa,
                                      AlphaLipschitzMode mode = AlphaLipschitzMode::kComposite);

/// h(x) = radius^2 - x_component^2, i.e. |x_component| <= radius. l_h is the
/// supremum of |2 x_component| over the operating box.
BarrierSpec make_quadratic_bound_barrier(std::size_t component, double radius,
                                         const Box& operating_box, double kappa,
                                         AlphaLipschitzMode mode = AlphaLipschitzMode::kComposite);

struct BarrierCheck {
  bool alpha_ok = true;
  bool gradient_ok = true;
  double max_grad_norm = 0.0;
  std::optional<Vector> gradient_witness;
};

/// Spot-checks the BarrierSpec invariants: alpha(0) = 0, alpha strictly
/// increasing on a fixed set of test points, ||grad_h|| <= l_h on `samples`
/// uniform points of the operating box.
BarrierCheck check_barrier(const BarrierSpec& barrier, const Box& operating_box,
                           std::size_t samples, std::uint64_t seed);

}  // namespace sdcbf
