#pragma once

#include "sdcbf/types.hpp"

namespace sdcbf {

/// How the sampling-period term of the error bound E is assembled.
///  - kUnscaledAlpha: (L_h*Theta*beta + L_alpha) / Theta * (exp(Theta*dt) - 1)
///  - kReachScaled:   (L_h*Theta + L_alpha) * beta / Theta * (exp(Theta*dt) - 1),
///                    i.e. both Lipschitz terms multiply the reach radius.
enum class GronwallForm { kUnscaledAlpha, kReachScaled };

/// Known Lipschitz constants and suprema of the unknown dynamics f, g.
///
/// Immutable after construction; build through make_lipschitz_spec so that
/// theta_max is derived consistently from the input box.
class LipschitzSpec {
 public:
  const Vector& l_f() const { return l_f_; }
  const Matrix& l_g() const { return l_g_; }
  double beta_norm() const { return beta_norm_; }
  double g_sup() const { return g_sup_; }
  double theta_max() const { return theta_max_; }
  GronwallForm gronwall_form() const { return form_; }

  std::size_t state_dim() const { return static_cast<std::size_t>(l_f_.size()); }
  std::size_t input_dim() const { return static_cast<std::size_t>(l_g_.cols()); }

 private:
  friend LipschitzSpec make_lipschitz_spec(Vector, Matrix, double, double, const Box&,
                                           GronwallForm);
  LipschitzSpec() = default;

  Vector l_f_;
  Matrix l_g_;
  double beta_norm_ = 0.0;
  double g_sup_ = 0.0;
  double theta_max_ = 0.0;
  GronwallForm form_ = GronwallForm::kUnscaledAlpha;
};

/// Validates the constants and derives theta_max = theta(u_vertex), where
/// u_vertex maximizes every |u_s| over the input box.
///
/// Throws DimensionError when l_g is not n x input_box.dim(), ConfigError on a
/// negative or non-finite constant.
LipschitzSpec make_lipschitz_spec(Vector l_f, Matrix l_g, double beta_norm, double g_sup,
                                  const Box& input_box,
                                  GronwallForm form = GronwallForm::kUnscaledAlpha);

}  // namespace sdcbf
