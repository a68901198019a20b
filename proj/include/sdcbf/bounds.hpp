#pragma once

#include "sdcbf/barrier.hpp"
#include "sdcbf/dataset.hpp"
#include "sdcbf/lipschitz.hpp"
#include "sdcbf/types.hpp"

namespace sdcbf {

/// Largest admissible Theta * dt before a bound is reported as overflow.
inline constexpr double kMaxExponent = 50.0;

/// Half-width of the data-driven dynamics interval, split into the part that
/// does not depend on the decision input and the gamma part that does.
struct WBound {
  double fixed_part = 0.0;
  double gamma_part = 0.0;
  double total = 0.0;
};

/// E(dt, u) = gronwall_term + dynamics_term.
struct ErrorBound {
  double gronwall_term = 0.0;
  double dynamics_term = 0.0;
  double total = 0.0;
};

/// sqrt(sum_j (L_f_j + sum_s L_g_js |u_s|)^2)
double theta(const Vector& u, const LipschitzSpec& spec);

/// g_sup * ||u - u_ref||_2
double gamma(const Vector& u, const Vector& u_ref, double g_sup);

/// (exp(theta * dt) - 1) / theta, continuously extended by dt at theta = 0.
/// Throws BoundOverflowError when theta * dt > kMaxExponent.
double gronwall_factor(double theta_value, double dt);

/// beta / Theta * (exp(Theta * dt) - 1): bound on ||x_t - x_T|| within one
/// held period of length dt.
double reach_radius(double dt, const LipschitzSpec& spec);
double reach_radius(double dt, double beta_norm, double theta_max);

WBound w_bound(const Vector& x_now, const SampleTriple& sample, const Vector& u,
               const LipschitzSpec& spec);

/// The sampling-period part of E; its form follows spec.gronwall_form().
double gronwall_term(double dt, const BarrierSpec& barrier, const LipschitzSpec& spec);

/// Upper bound on |e| over one sampling period:
/// gronwall_term + 2 L_h max(||xdot + w 1||, ||xdot - w 1||).
ErrorBound error_bound(double dt, const WBound& w, const Vector& xdot, const BarrierSpec& barrier,
                       const LipschitzSpec& spec);

/// theta(u) * ||x - x'||_2
double derivative_deviation_bound(const Vector& x, const Vector& x_prime, const Vector& u,
                                  const LipschitzSpec& spec);

/// max(||v + s 1||, ||v - s 1||)
double shifted_norm_max(const Vector& v, double shift);

}  // namespace sdcbf
