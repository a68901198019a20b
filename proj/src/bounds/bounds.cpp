#include "sdcbf/bounds.hpp"

#include "sdcbf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sdcbf {

double theta(const Vector& u, const LipschitzSpec& spec) {
  require_dim(u, spec.input_dim(), "theta");
  const Vector row = spec.l_f() + spec.l_g() * u.cwiseAbs();
  return row.norm();
}

double gamma(const Vector& u, const Vector& u_ref, double g_sup) {
  if (u.size() != u_ref.size()) throw DimensionError("gamma: input dimensions differ");
  return g_sup * (u - u_ref).norm();
}

double gronwall_factor(double theta_value, double dt) {
  if (dt < 0.0) throw Error("gronwall_factor: negative duration");
  const double exponent = theta_value * dt;
  if (exponent > kMaxExponent) {
    throw BoundOverflowError("Theta * dt = " + std::to_string(exponent) + " exceeds " +
                             std::to_string(kMaxExponent));
  }
  if (theta_value == 0.0) return dt;
  return std::expm1(exponent) / theta_value;
}

double reach_radius(double dt, double beta_norm, double theta_max) {
  return beta_norm * gronwall_factor(theta_max, dt);
}

double reach_radius(double dt, const LipschitzSpec& spec) {
  return reach_radius(dt, spec.beta_norm(), spec.theta_max());
}

WBound w_bound(const Vector& x_now, const SampleTriple& sample, const Vector& u,
               const LipschitzSpec& spec) {
  require_dim(x_now, spec.state_dim(), "w_bound state");
  require_dim(sample.x_start, spec.state_dim(), "w_bound sample");
  require_dim(u, spec.input_dim(), "w_bound input");
  const double th = theta(sample.u_held, spec);
  const double sqrt_n = std::sqrt(static_cast<double>(spec.state_dim()));
  WBound w;
  w.fixed_part = th * (x_now - sample.x_start).norm() +
                 sqrt_n * th * reach_radius(sample.duration(), spec);
  w.gamma_part = gamma(u, sample.u_held, spec.g_sup());
  w.total = w.fixed_part + w.gamma_part;
  return w;
}

double gronwall_term(double dt, const BarrierSpec& barrier, const LipschitzSpec& spec) {
  const double factor = gronwall_factor(spec.theta_max(), dt);
  const double lh_beta_theta = barrier.l_h * spec.theta_max() * spec.beta_norm();
  switch (spec.gronwall_form()) {
    case GronwallForm::kUnscaledAlpha:
      return (lh_beta_theta + barrier.l_alpha_eff) * factor;
    case GronwallForm::kReachScaled:
      return (lh_beta_theta + barrier.l_alpha_eff * spec.beta_norm()) * factor;
  }
  return 0.0;
}

double shifted_norm_max(const Vector& v, double shift) {
  const Vector ones = Vector::Ones(v.size());
  return std::max((v + shift * ones).norm(), (v - shift * ones).norm());
}

ErrorBound error_bound(double dt, const WBound& w, const Vector& xdot, const BarrierSpec& barrier,
                       const LipschitzSpec& spec) {
  require_dim(xdot, spec.state_dim(), "error_bound rate");
  ErrorBound e;
  e.gronwall_term = gronwall_term(dt, barrier, spec);
  e.dynamics_term = 2.0 * barrier.l_h * shifted_norm_max(xdot, w.total);
  e.total = e.gronwall_term + e.dynamics_term;
  return e;
}

double derivative_deviation_bound(const Vector& x, const Vector& x_prime, const Vector& u,
                                  const LipschitzSpec& spec) {
  require_dim(x, spec.state_dim(), "derivative_deviation_bound");
  require_dim(x_prime, spec.state_dim(), "derivative_deviation_bound");
  return theta(u, spec) * (x - x_prime).norm();
}

}  // namespace sdcbf
