#include "sdcbf/errors.hpp"
#include "sdcbf/sim.hpp"

#include <algorithm>
#include <cmath>

namespace sdcbf {

const char* to_string(StepStatus s) {
  switch (s) {
    case StepStatus::kSynthesized:
      return "synthesized";
    case StepStatus::kFallback:
      return "fallback";
    case StepStatus::kBaseline:
      return "baseline";
    case StepStatus::kStopped:
      return "stopped";
  }
  return "?";
}

SynthesizedController::SynthesizedController(const Synthesizer& synthesizer,
                                             FallbackPolicy fallback)
    : synth_(synthesizer), fallback_(fallback) {}

ControllerOutput SynthesizedController::compute(double /*t*/, const Vector& x) {
  ControllerOutput out;
  try {
    StepResult r = synth_.step(x);
    if (auto* d = std::get_if<ControlDecision>(&r)) {
      out.u = d->u_star;
      out.status = StepStatus::kSynthesized;
      out.decision = std::move(*d);
      return out;
    }
    out.infeasibility = std::get<InfeasibilityReport>(std::move(r));
    out.note = out.infeasibility->reason;
  } catch (const UnsafeStateError& e) {
    out.note = e.what();
  } catch (const OperatingBoxError& e) {
    out.note = e.what();
  }
  if (fallback_ == FallbackPolicy::kFailStop) {
    out.status = StepStatus::kStopped;
    out.u = Vector::Zero(static_cast<Eigen::Index>(synth_.lipschitz().input_dim()));
    return out;
  }
  out.status = StepStatus::kFallback;
  out.u = synth_.samples()[synth_.samples().nearest(x)].u_held;
  return out;
}

BaselineController::BaselineController(const ControlAffinePlant& plant, BarrierSpec barrier,
                                       SynthesisConfig cfg)
    : plant_(plant), barrier_(std::move(barrier)), cfg_(std::move(cfg)) {}

ControllerOutput BaselineController::compute(double /*t*/, const Vector& x) {
  ControllerOutput out;
  out.status = StepStatus::kBaseline;
  try {
    out.u = baseline_cbf_qp(x, plant_, barrier_, cfg_);
  } catch (const InfeasibleError& e) {
    // Best effort: push h up as hard as the box allows.
    const Vector a = (barrier_.grad_h(x).transpose() * plant_.g(x)).transpose();
    out.u = Vector(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      out.u[i] = a[i] >= 0.0 ? cfg_.input_box.hi[i] : cfg_.input_box.lo[i];
    }
    out.status = StepStatus::kFallback;
    out.note = e.what();
  }
  return out;
}

RunResult run_closed_loop(const PlantModel& plant, Controller& controller, const Vector& x0,
                          double dt, std::size_t horizon_steps, const SynthesisConfig& cfg,
                          const BarrierSpec& barrier) {
  if (!(dt > 0.0)) throw ConfigError("run_closed_loop: dt must be > 0");
  require_dim(x0, plant.state_dim(), "run_closed_loop");
  if (barrier.h(x0) < 0.0) throw UnsafeStateError("initial state outside the safe set");

  RunResult result;
  Trajectory& traj = result.trajectory;
  traj.sample_times.push_back(0.0);
  traj.states.push_back(x0);
  traj.fine_times.push_back(0.0);
  traj.fine_states.push_back(x0);
  traj.min_h = barrier.h(x0);
  traj.left_operating_box = !cfg.operating_box.contains(x0);

  Vector x = x0;
  for (std::size_t z = 0; z < horizon_steps; ++z) {
    // Sample times are z * dt exactly, not accumulated sums.
    const double t = static_cast<double>(z) * dt;
    StepRecord rec;
    rec.t = t;
    rec.h = barrier.h(x);
    rec.output = controller.compute(t, x);
    const bool stop = rec.output.status == StepStatus::kStopped;
    result.steps.push_back(rec);
    if (stop) {
      result.status = RunStatus::kStoppedInfeasible;
      break;
    }
    const Vector& u = result.steps.back().output.u;
    ZohSegment seg = integrate_zoh(plant, x, u, dt, cfg.substeps, t, &cfg.operating_box);
    // Pin the segment end to the exact next sample time.
    seg.times.back() = static_cast<double>(z + 1) * dt;
    for (std::size_t i = 0; i < seg.states.size(); ++i) {
      traj.fine_times.push_back(seg.times[i]);
      traj.min_h = std::min(traj.min_h, barrier.h(seg.states[i]));
      traj.fine_states.push_back(std::move(seg.states[i]));
    }
    traj.left_operating_box = traj.left_operating_box || seg.left_operating_box;
    traj.inputs.push_back(u);
    x = seg.x_next;
    traj.sample_times.push_back(static_cast<double>(z + 1) * dt);
    traj.states.push_back(x);
  }
  return result;
}

}  // namespace sdcbf
