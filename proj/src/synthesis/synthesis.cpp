#include "sdcbf/synthesis.hpp"

#include "sdcbf/bounds.hpp"
#include "sdcbf/errors.hpp"
#include "sdcbf/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sdcbf {

namespace {

constexpr int kBisectionIterations = 200;
constexpr double kBoxTol = 1e-9;

}  // namespace

double ConstraintData::value(int s1, int s2, double p) const {
  const Vector shifted = xdot.array() + s1 * p;
  return 2.0 * l_h * shifted.norm() + s2 * grad_dot_ones * p - grad_dot_xdot - rhs;
}

std::array<double, 4> ConstraintData::values(double p) const {
  std::array<double, 4> out{};
  for (std::size_t k = 0; k < 4; ++k) out[k] = value(kConstraintSigns[k][0], kConstraintSigns[k][1], p);
  return out;
}

double ConstraintData::max_value(double p) const {
  const auto v = values(p);
  return *std::max_element(v.begin(), v.end());
}

ConstraintData build_constraints(const Vector& x_now, const DynamicsInterval& interval,
                                 const BarrierSpec& barrier, const LipschitzSpec& spec, double dt) {
  require_dim(x_now, spec.state_dim(), "build_constraints");
  require_dim(interval.center, spec.state_dim(), "build_constraints rate");
  const double h = barrier.h(x_now);
  if (h < 0.0) throw UnsafeStateError("h(x) < 0: state is already outside the safe set");
  ConstraintData c;
  c.xdot = interval.center;
  c.grad = barrier.grad_h(x_now);
  c.grad_dot_xdot = c.grad.dot(c.xdot);
  c.grad_dot_ones = c.grad.sum();
  c.l_h = barrier.l_h;
  c.alpha_h = barrier.alpha(h);
  c.gronwall = gronwall_term(dt, barrier, spec);
  c.rhs = c.alpha_h - c.gronwall;
  return c;
}

namespace {

// Unconstrained minimiser of c_{s1,s2} over p (may be +/-infinity).
double constraint_minimizer(const ConstraintData& c, int s1, int s2) {
  // In q = s1 p:  c = A sqrt(n (q - q0)^2 + r2) + b q + const.
  const double n = static_cast<double>(c.xdot.size());
  const double a = 2.0 * c.l_h;
  const double b = static_cast<double>(s2 * s1) * c.grad_dot_ones;
  const double sum = c.xdot.sum();
  const double q0 = -sum / n;
  const double r2 = std::max(0.0, c.xdot.squaredNorm() - sum * sum / n);
  const double slope = a * std::sqrt(n);
  double q = 0.0;
  if (std::abs(b) >= slope) {
    q = b > 0.0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  } else {
    q = q0 - b * std::sqrt(r2) / std::sqrt(n * (a * a * n - b * b));
  }
  return s1 > 0 ? q : -q;
}

// Boundary between feasible and infeasible on a monotone side. `good` is
// feasible, `bad` is not; returns a feasible point within tolerance of the
// boundary.
template <class Fn>
double bisect_boundary(Fn&& fn, double good, double bad) {
  for (int it = 0; it < kBisectionIterations; ++it) {
    const double mid = 0.5 * (good + bad);
    if (mid == good || mid == bad) break;
    if (fn(mid) <= 0.0) {
      good = mid;
    } else {
      bad = mid;
    }
  }
  return good;
}

std::optional<PInterval> single_interval(const ConstraintData& c, int s1, int s2, double p_lo,
                                         double p_hi) {
  auto fn = [&](double p) { return c.value(s1, s2, p); };
  const double pm = std::clamp(constraint_minimizer(c, s1, s2), p_lo, p_hi);
  if (fn(pm) > 0.0) return std::nullopt;
  PInterval out;
  out.lo = fn(p_lo) <= 0.0 ? p_lo : bisect_boundary(fn, pm, p_lo);
  out.hi = fn(p_hi) <= 0.0 ? p_hi : bisect_boundary(fn, pm, p_hi);
  return out;
}

}  // namespace

std::optional<PInterval> feasible_p_interval(const ConstraintData& c, double p_lo, double p_hi) {
  if (!(p_lo >= 0.0) || !(p_hi >= p_lo)) {
    throw Error("feasible_p_interval: requires 0 <= p_lo <= p_hi");
  }
  PInterval acc{p_lo, p_hi};
  for (const auto& s : kConstraintSigns) {
    const auto one = single_interval(c, s[0], s[1], p_lo, p_hi);
    if (!one) return std::nullopt;
    acc.lo = std::max(acc.lo, one->lo);
    acc.hi = std::min(acc.hi, one->hi);
    if (acc.lo > acc.hi) return std::nullopt;
  }
  return acc;
}

std::optional<Vector> recover_control(double p_star, const SampleTriple& sample,
                                      const Vector& x_now, const SynthesisConfig& cfg,
                                      const LipschitzSpec& spec) {
  const Vector& u_held = sample.u_held;
  require_dim(u_held, cfg.input_box.dim(), "recover_control");
  const double fixed = w_bound(x_now, sample, u_held, spec).fixed_part;
  double budget = p_star - fixed;
  if (budget < -1e-9 * std::max(1.0, std::abs(p_star))) {
    throw Error("recover_control: p_star below the fixed part of w");
  }
  budget = std::max(budget, 0.0);

  if (!cfg.input_box.contains(u_held, kBoxTol)) return std::nullopt;
  if (budget == 0.0) return cfg.input_box.clamp(u_held);
  if (spec.g_sup() == 0.0) {
    // Every u realises the same w; only p_star == fixed_part is attainable.
    return std::nullopt;
  }
  const double radius = budget / spec.g_sup();
  const auto m = static_cast<Eigen::Index>(u_held.size());

  std::vector<Vector> directions;
  for (Eigen::Index i = 0; i < m; ++i) {
    directions.push_back(Vector::Unit(m, i));
    directions.push_back(-Vector::Unit(m, i));
  }
  if (m > 1) {
    if (const auto u_min = solve_small_qp(cfg.cost_matrix, cfg.input_box, std::nullopt)) {
      const Vector to_min = *u_min - u_held;
      if (to_min.norm() > 0.0) directions.push_back(to_min.normalized());
    }
    const Vector to_far = cfg.input_box.farthest_vertex(u_held) - u_held;
    if (to_far.norm() > 0.0) directions.push_back(to_far.normalized());
  }

  std::optional<Vector> best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (const auto& d : directions) {
    const Vector u = u_held + radius * d;
    if (!cfg.input_box.contains(u, kBoxTol)) continue;
    const Vector clamped = cfg.input_box.clamp(u);
    const double cost = clamped.dot(cfg.cost_matrix * clamped);
    if (cost < best_cost) {
      best_cost = cost;
      best = clamped;
    }
  }
  return best;
}

FeasibilityDiagnostics feasibility_margin(const Vector& x_now, const DynamicsInterval& interval,
                                          const BarrierSpec& barrier, const LipschitzSpec& spec,
                                          double dt) {
  FeasibilityDiagnostics d;
  d.gronwall_term = gronwall_term(dt, barrier, spec);
  d.alpha_h = barrier.alpha(barrier.h(x_now));
  d.lhs = d.gronwall_term - d.alpha_h;
  const Vector grad = barrier.grad_h(x_now);
  const double w = interval.half_width;
  const double worst = 2.0 * barrier.l_h * shifted_norm_max(interval.center, w);
  d.rhs_plus = grad.dot(interval.center) + w * grad.sum() - worst;
  d.rhs_minus = grad.dot(interval.center) - w * grad.sum() - worst;
  d.margin_plus = d.rhs_plus - d.lhs;
  d.margin_minus = d.rhs_minus - d.lhs;
  return d;
}

Synthesizer::Synthesizer(const SampleSet& samples, SynthesisConfig cfg, LipschitzSpec spec,
                         BarrierSpec barrier)
    : samples_(&samples),
      cfg_(std::move(cfg)),
      spec_(std::move(spec)),
      barrier_(std::move(barrier)),
      selector_(samples, spec_) {
  cfg_.validate();
}

StepResult Synthesizer::step(const Vector& x_now) const {
  require_dim(x_now, spec_.state_dim(), "synthesize_step");
  if (barrier_.h(x_now) < 0.0) {
    throw UnsafeStateError("h(x) < 0: state is already outside the safe set");
  }
  const std::size_t k = selector_.select_index(x_now, Vector::Zero(spec_.input_dim()));
  const SampleTriple& sample = (*samples_)[k];
  const DynamicsInterval interval =
      dynamics_interval(x_now, sample.u_held, sample, spec_, cfg_.operating_box);
  const ConstraintData c = build_constraints(x_now, interval, barrier_, spec_, cfg_.dt);

  const double fixed = interval.half_width;  // u = u_held: gamma part is zero
  const double p_max = fixed + spec_.g_sup() * cfg_.input_box.max_distance_from(sample.u_held);

  auto infeasible = [&](std::string reason) {
    InfeasibilityReport r;
    r.reason = std::move(reason);
    r.sample_index = k;
    r.fixed_part = fixed;
    r.p_max = p_max;
    r.gronwall_term = c.gronwall;
    const auto v = c.values(fixed);
    for (std::size_t i = 0; i < 4; ++i) r.margins[i] = -v[i];
    return StepResult{std::move(r)};
  };

  const auto interval_p = feasible_p_interval(c, fixed, p_max);
  if (!interval_p) return infeasible("no p in [fixed_part, p_max] satisfies the constraints");

  // Largest p whose sphere meets U; search downward when the top fails.
  double p = interval_p->hi;
  std::optional<Vector> u = recover_control(p, sample, x_now, cfg_, spec_);
  if (!u) {
    double good = interval_p->lo;
    auto u_good = recover_control(good, sample, x_now, cfg_, spec_);
    if (!u_good) return infeasible("sphere does not meet U for any feasible p");
    double bad = p;
    for (int it = 0; it < kBisectionIterations; ++it) {
      const double mid = 0.5 * (good + bad);
      if (mid == good || mid == bad) break;
      if (auto um = recover_control(mid, sample, x_now, cfg_, spec_)) {
        good = mid;
        u_good = std::move(um);
      } else {
        bad = mid;
      }
    }
    p = good;
    u = std::move(u_good);
  }

  ControlDecision d;
  d.u_star = *u;
  d.p_star = p;
  d.ball_radius = spec_.g_sup() > 0.0 ? (p - fixed) / spec_.g_sup() : 0.0;
  d.cost = d.u_star.dot(cfg_.cost_matrix * d.u_star);
  const auto v = c.values(p);
  for (std::size_t i = 0; i < 4; ++i) d.margins[i] = -v[i];
  d.sample_index = k;
  d.fixed_part = fixed;
  d.gronwall_term = c.gronwall;
  d.p_interval = *interval_p;

  const WBound w = w_bound(x_now, sample, d.u_star, spec_);
  const ErrorBound e = error_bound(cfg_.dt, w, c.xdot, barrier_, spec_);
  const double plus = c.grad.dot(c.xdot) + w.total * c.grad_dot_ones + c.alpha_h - e.total;
  const double minus = c.grad.dot(c.xdot) - w.total * c.grad_dot_ones + c.alpha_h - e.total;
  d.posthoc_slack = std::min(plus, minus);
  if (d.posthoc_slack < -1e-9 * std::max(1.0, std::abs(e.total))) {
    throw Error("synthesized input violates the sufficient CBF condition (slack " +
                std::to_string(d.posthoc_slack) + ")");
  }
  return d;
}

StepResult synthesize_step(const Vector& x_now, const SampleSet& samples,
                           const SynthesisConfig& cfg, const LipschitzSpec& spec,
                           const BarrierSpec& barrier) {
  if (samples.empty()) throw DatasetError("synthesis requires a nonempty dataset");
  return Synthesizer(samples, cfg, spec, barrier).step(x_now);
}

}  // namespace sdcbf
