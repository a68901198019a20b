#pragma once

#include "sdcbf/barrier.hpp"
#include "sdcbf/config.hpp"
#include "sdcbf/dataset.hpp"
#include "sdcbf/plant.hpp"
#include "sdcbf/synthesis.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace sdcbf {

// ---- integration ----------------------------------------------------------

struct ZohSegment {
  Vector x_next;
  /// Substep times t0 + i * dt / substeps, i = 1..substeps, and the states
  /// reached at those times.
  std::vector<double> times;
  std::vector<Vector> states;
  bool left_operating_box = false;
};

/// Classic fixed-step RK4 over [t0, t0 + dt] with u held constant.
ZohSegment integrate_zoh(const PlantModel& plant, const Vector& x0, const Vector& u, double dt,
                         int substeps, double t0 = 0.0, const Box* operating_box = nullptr);

// ---- closed loop ----------------------------------------------------------

struct Trajectory {
  std::vector<double> sample_times;
  std::vector<Vector> states;
  /// Inputs held over [sample_times[z], sample_times[z + 1]).
  std::vector<Vector> inputs;
  /// Fine trace, starting with (0, x0).
  std::vector<double> fine_times;
  std::vector<Vector> fine_states;
  double min_h = 0.0;
  bool left_operating_box = false;
};

enum class StepStatus { kSynthesized, kFallback, kBaseline, kStopped };

const char* to_string(StepStatus s);

struct ControllerOutput {
  Vector u;
  StepStatus status = StepStatus::kSynthesized;
  std::optional<ControlDecision> decision;
  std::optional<InfeasibilityReport> infeasibility;
  std::string note;
};

/// Sampled-state feedback. Controllers only ever see the sampled state.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual ControllerOutput compute(double t, const Vector& x) = 0;
};

/// Data-driven controller: a Synthesizer plus the runtime fallback policy.
class SynthesizedController final : public Controller {
 public:
  SynthesizedController(const Synthesizer& synthesizer, FallbackPolicy fallback);
  ControllerOutput compute(double t, const Vector& x) override;

 private:
  const Synthesizer& synth_;
  FallbackPolicy fallback_;
};

/// Known-dynamics CBF-QP used as the comparison baseline.
class BaselineController final : public Controller {
 public:
  BaselineController(const ControlAffinePlant& plant, BarrierSpec barrier, SynthesisConfig cfg);
  ControllerOutput compute(double t, const Vector& x) override;

 private:
  const ControlAffinePlant& plant_;
  BarrierSpec barrier_;
  SynthesisConfig cfg_;
};

struct StepRecord {
  double t = 0.0;
  double h = 0.0;
  ControllerOutput output;
};

enum class RunStatus { kCompleted, kStoppedInfeasible };

struct RunResult {
  Trajectory trajectory;
  std::vector<StepRecord> steps;
  RunStatus status = RunStatus::kCompleted;
};

/// Throws UnsafeStateError if h(x0) < 0. A kStopped controller output ends
/// the run early with kStoppedInfeasible; unsafe fine-trace states do not.
RunResult run_closed_loop(const PlantModel& plant, Controller& controller, const Vector& x0,
                          double dt, std::size_t horizon_steps, const SynthesisConfig& cfg,
                          const BarrierSpec& barrier);

// ---- dataset generation -----------------------------------------------------

using InputSampler = std::function<Vector(std::mt19937_64&)>;

InputSampler uniform_input_sampler(const Box& input_box);

/// n_traj random trajectories of n_steps held periods each. Initial states are
/// uniform in the operating box; triples with h(x_start) < 0 or whose segment
/// leaves the operating box are dropped. Trajectories run on worker threads,
/// each with its own seed derived from (seed, trajectory index), so the
/// result does not depend on scheduling.
SampleSet generate_dataset(const PlantModel& plant, std::size_t n_traj, std::size_t n_steps,
                           double dt, const InputSampler& input_sampler,
                           const BarrierSpec& barrier, std::uint64_t seed, int substeps,
                           const Box& operating_box);

// ---- baseline -------------------------------------------------------------

/// argmin u'Ru s.t. grad_h.f(x) + grad_h.g(x) u + alpha(h(x)) >= 0, u in U.
/// Throws InfeasibleError when the half-space misses the input box.
Vector baseline_cbf_qp(const Vector& x, const ControlAffinePlant& plant,
                       const BarrierSpec& barrier, const SynthesisConfig& cfg);

// ---- monitoring -------------------------------------------------------------

struct SafetyReport {
  double min_h = 0.0;
  std::optional<double> first_violation_time;
  std::optional<std::size_t> first_violation_index;
  std::vector<double> times;
  std::vector<double> margins;
  /// Mean distance to the boundary of C, when the barrier provides one.
  std::optional<double> mean_boundary_distance;
};

SafetyReport safety_monitor(const Trajectory& traj, const BarrierSpec& barrier);

// ---- files ------------------------------------------------------------------

/// Columns t, x_0.., u_0.., h at fine resolution. u is the input held from
/// that row onwards (the last row repeats the final input; nan when there is
/// none).
void write_trajectory_csv(const Trajectory& traj, const BarrierSpec& barrier,
                          const std::filesystem::path& path);

/// Columns t, h, p_star, ball_radius, u_0.., margin_pp, margin_pm, margin_mp,
/// margin_mm, gronwall_term, status (0 synthesized, 1 fallback, 2 baseline,
/// 3 stopped). Fields without a value are nan.
void write_diagnostics_csv(const std::vector<StepRecord>& steps, std::size_t input_dim,
                           const std::filesystem::path& path);

struct TrajectoryTable {
  std::size_t state_dim = 0;
  std::size_t input_dim = 0;
  std::vector<double> t;
  std::vector<Vector> x;
  std::vector<Vector> u;
  std::vector<double> h;
};

/// Throws ParseError on empty or malformed files.
TrajectoryTable read_trajectory_csv(const std::filesystem::path& path);

}  // namespace sdcbf
