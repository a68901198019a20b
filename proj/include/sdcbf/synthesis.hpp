#pragma once

#include "sdcbf/barrier.hpp"
#include "sdcbf/config.hpp"
#include "sdcbf/dataset.hpp"
#include "sdcbf/lipschitz.hpp"
#include "sdcbf/oracle.hpp"

#include <array>
#include <optional>
#include <string>
#include <variant>

namespace sdcbf {

/// Sign pairs (s1, s2) of the four constraint families, in margin order.
inline constexpr std::array<std::array<int, 2>, 4> kConstraintSigns{
    {{{+1, +1}}, {{+1, -1}}, {{-1, +1}}, {{-1, -1}}}};

/// Scalar reformulation of the data-driven CBF constraint at one state:
///   c_{s1,s2}(p) = 2 L_h ||xdot + s1 p 1|| + s2 (grad . 1) p - grad . xdot - rhs <= 0
/// with rhs = alpha(h(x)) - gronwall_term.
struct ConstraintData {
  Vector xdot;
  Vector grad;
  double grad_dot_xdot = 0.0;
  double grad_dot_ones = 0.0;
  double rhs = 0.0;
  double l_h = 0.0;
  double alpha_h = 0.0;
  double gronwall = 0.0;

  double value(int s1, int s2, double p) const;
  std::array<double, 4> values(double p) const;
  double max_value(double p) const;
};

struct PInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct ControlDecision {
  Vector u_star;
  double p_star = 0.0;
  double ball_radius = 0.0;
  double cost = 0.0;
  /// -c_{s1,s2}(p_star), in kConstraintSigns order; all >= 0.
  std::array<double, 4> margins{};
  std::size_t sample_index = 0;
  double fixed_part = 0.0;
  double gronwall_term = 0.0;
  PInterval p_interval;
  /// min over both signs of grad.(xdot +/- w 1) + alpha(h) - E evaluated at
  /// w = w(u_star).
  double posthoc_slack = 0.0;
};

struct InfeasibilityReport {
  std::string reason;
  std::size_t sample_index = 0;
  double fixed_part = 0.0;
  double p_max = 0.0;
  double gronwall_term = 0.0;
  /// -c_{s1,s2}(fixed_part): how far the tightest admissible p misses.
  std::array<double, 4> margins{};
};

using StepResult = std::variant<ControlDecision, InfeasibilityReport>;

/// Throws UnsafeStateError when h(x_now) < 0.
ConstraintData build_constraints(const Vector& x_now, const DynamicsInterval& interval,
                                 const BarrierSpec& barrier, const LipschitzSpec& spec, double dt);

/// {p in [p_lo, p_hi] : all four c(p) <= 0}. Each c is convex in p: its
/// minimiser is found in closed form and each monotone side is bisected, so
/// endpoints are accurate to ~1e-12 and always lie on the feasible side.
std::optional<PInterval> feasible_p_interval(const ConstraintData& c, double p_lo, double p_hi);

/// Minimum-cost u in U on the sphere ||u - u_held|| = (p_star - fixed_part) / g_sup.
/// m = 1 checks both sphere points exactly; m > 1 searches a finite direction
/// set (+/- axes, towards the cost minimiser, towards the farthest box vertex).
/// Returns nullopt when no searched point lies in U.
std::optional<Vector> recover_control(double p_star, const SampleTriple& sample,
                                      const Vector& x_now, const SynthesisConfig& cfg,
                                      const LipschitzSpec& spec);

/// Quantities of the sampling-period feasibility condition at w = interval.half_width.
struct FeasibilityDiagnostics {
  double gronwall_term = 0.0;
  double alpha_h = 0.0;
  /// gronwall_term - alpha(h)
  double lhs = 0.0;
  /// grad.(xdot +/- w 1) - 2 L_h max(||xdot + w 1||, ||xdot - w 1||)
  double rhs_plus = 0.0;
  double rhs_minus = 0.0;
  double margin_plus = 0.0;
  double margin_minus = 0.0;
};

FeasibilityDiagnostics feasibility_margin(const Vector& x_now, const DynamicsInterval& interval,
                                          const BarrierSpec& barrier, const LipschitzSpec& spec,
                                          double dt);

/// Per-state synthesis over a fixed dataset. Holds no plant: everything about
/// the dynamics comes from the samples and the Lipschitz constants.
class Synthesizer {
 public:
  Synthesizer(const SampleSet& samples, SynthesisConfig cfg, LipschitzSpec spec,
              BarrierSpec barrier);

  /// Throws UnsafeStateError if h(x_now) < 0 and OperatingBoxError if x_now is
  /// outside the operating box. Infeasibility is returned, not thrown.
  StepResult step(const Vector& x_now) const;

  const SampleSet& samples() const { return *samples_; }
  const SynthesisConfig& config() const { return cfg_; }
  const LipschitzSpec& lipschitz() const { return spec_; }
  const BarrierSpec& barrier() const { return barrier_; }
  const SampleSelector& selector() const { return selector_; }

 private:
  const SampleSet* samples_;
  SynthesisConfig cfg_;
  LipschitzSpec spec_;
  BarrierSpec barrier_;
  SampleSelector selector_;
};

/// One-shot synthesis; throws DatasetError on an empty dataset.
StepResult synthesize_step(const Vector& x_now, const SampleSet& samples,
                           const SynthesisConfig& cfg, const LipschitzSpec& spec,
                           const BarrierSpec& barrier);

}  // namespace sdcbf
