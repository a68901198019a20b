// Runs every acceptance criterion on the shipped DC-motor configuration and
// prints one PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include "sdcbf/bounds.hpp"
#include "sdcbf/cli.hpp"
#include "sdcbf/oracle.hpp"
#include "sdcbf/sim.hpp"
#include "sdcbf/synthesis.hpp"

#include "support/oracles.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

using namespace sdcbf;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

double min_h_of(const fs::path& trajectory) {
  const TrajectoryTable t = read_trajectory_csv(trajectory);
  double m = std::numeric_limits<double>::infinity();
  for (double h : t.h) m = std::min(m, h);
  return m;
}

struct PipelineRun {
  fs::path dir;
  int synth_exit = -1;
  int base_exit = -1;
  double seconds = 0.0;
};

PipelineRun run_pipeline(const fs::path& dir) {
  std::ostringstream log;
  PipelineRun r;
  r.dir = dir;
  const auto start = std::chrono::steady_clock::now();
  cli::cmd_gen_data({SDCBF_CONFIG_PATH, dir / "data", std::nullopt}, log);
  cli::RunOptions run;
  run.config = SDCBF_CONFIG_PATH;
  run.dataset = dir / "data" / "dataset.csv";
  run.out = dir / "synth";
  r.synth_exit = cli::cmd_run(run, log);
  run.controller = "baseline";
  run.out = dir / "baseline";
  r.base_exit = cli::cmd_run(run, log);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

Vector scalar(double u) { return Vector::Constant(1, u); }

}  // namespace

int main() {
  const ExperimentConfig cfg = load_config(SDCBF_CONFIG_PATH);
  const LipschitzSpec spec = cfg.lipschitz_spec();
  const BarrierSpec barrier = cfg.barrier_spec();
  const Box& op = cfg.synthesis.operating_box;
  const Box& ubox = cfg.synthesis.input_box;
  const double dt = cfg.synthesis.dt;
  const auto plant = make_plant(cfg.plant);

  const fs::path work = fs::temp_directory_path() / "sdcbf_acceptance";
  fs::remove_all(work);

  // 1. Closed-loop safety of both controllers on the shipped configuration.
  const PipelineRun first = run_pipeline(work / "first");
  const SampleSet samples = read_dataset_csv(first.dir / "data" / "dataset.csv");
  {
    const double synth_min = min_h_of(first.dir / "synth" / "trajectory.csv");
    const double base_min = min_h_of(first.dir / "baseline" / "trajectory.csv");
    const std::size_t rows = read_trajectory_csv(first.dir / "synth" / "trajectory.csv").t.size();
    const bool pass = first.synth_exit == 0 && first.base_exit == 0 && synth_min >= 0.0 &&
                      base_min >= 0.0 && rows == cfg.horizon_steps * 100 + 1 &&
                      first.seconds < 120.0;
    report(1, pass,
           fmt("min_h synth=%.6g baseline=%.6g, fine rows=%.0f, dataset+runs %.1f s", synth_min,
               base_min, static_cast<double>(rows), first.seconds));
  }

  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u_dist(ubox.lo(0), ubox.hi(0));
  std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);

  // 2. The data-driven interval contains the hidden rate.
  {
    // Half the queries use a random triple, half the selected one.
    const SampleSelector selector(samples, spec);
    int ok = 0;
    const int total = 10000;
    for (int i = 0; i < total; ++i) {
      const Vector x = oracle::uniform_in(op.lo, op.hi, rng);
      const double u = u_dist(rng);
      const SampleTriple& s =
          i % 2 == 0 ? samples[pick(rng)] : samples[selector.select_index(x, scalar(u))];
      const DynamicsInterval iv = dynamics_interval(x, scalar(u), s, spec, op);
      if (iv.contains(oracle::motor_rate(x, u))) ++ok;
    }
    report(2, ok == total, fmt("%.0f / %.0f queries contained", ok, total));
  }

  // 3. Reach radius bounds the excursion within one held period.
  {
    const double bound = reach_radius(dt, spec);
    int ok = 0;
    int left = 0;
    double worst = 0.0;
    const int total = 1000;
    for (int i = 0; i < total; ++i) {
      const Vector x0 = oracle::uniform_in(op.lo, op.hi, rng);
      const double u = u_dist(rng);
      const ZohSegment seg = integrate_zoh(*plant, x0, scalar(u), dt, 100, 0.0, &op);
      if (seg.left_operating_box) ++left;
      double seg_worst = 0.0;
      bool inside = true;
      for (std::size_t k = 0; k < seg.states.size(); ++k) {
        const double d = (seg.states[k] - x0).norm();
        seg_worst = std::max(seg_worst, d);
        if (d > reach_radius(seg.times[k], spec)) inside = false;
      }
      worst = std::max(worst, seg_worst);
      if (inside && seg_worst <= bound) ++ok;
    }
    report(3, ok == total,
           fmt("%.0f / %.0f segments inside (max excursion %.4g, radius %.4g)", ok, total, worst,
               bound) +
               " [" + std::to_string(left) + " segments left the operating box]");
  }

  // 4. |e| stays below E over the held period.
  auto error_bound_check = [&](const LipschitzSpec& s_spec, int total, double* worst_ratio) {
    const SampleSelector selector(samples, s_spec);
    int ok = 0;
    int tested = 0;
    *worst_ratio = 0.0;
    while (tested < total) {
      const Vector xz = oracle::uniform_in(op.lo, op.hi, rng);
      if (barrier.h(xz) < 0.0) continue;
      const double u = u_dist(rng);
      const ZohSegment seg = integrate_zoh(*plant, xz, scalar(u), dt, 100, 0.0, &op);
      if (seg.left_operating_box) continue;
      const SampleTriple& s = samples[selector.select_index(xz, scalar(u))];
      const WBound w = w_bound(xz, s, scalar(u), s_spec);
      const DynamicsInterval iv = dynamics_interval(xz, scalar(u), s, s_spec, op);
      const double e_bound = error_bound(dt, w, iv.center, barrier, s_spec).total;
      const Vector rate_z = oracle::motor_rate(xz, u);
      const double cbf_z = barrier.grad_h(xz).dot(rate_z) + barrier.alpha(barrier.h(xz));
      double worst = 0.0;
      for (const Vector& xt : seg.states) {
        const double cbf_t =
            barrier.grad_h(xt).dot(oracle::motor_rate(xt, u)) + barrier.alpha(barrier.h(xt));
        worst = std::max(worst, std::abs(cbf_z - cbf_t));
      }
      *worst_ratio = std::max(*worst_ratio, worst / e_bound);
      if (worst <= e_bound) ++ok;
      ++tested;
    }
    return ok;
  };
  {
    double ratio = 0.0;
    const int ok = error_bound_check(spec, 1000, &ratio);
    report(4, ok == 1000, fmt("%.0f / 1000 steps with |e| <= E (max |e|/E = %.3g)", ok, ratio));
    const LipschitzSpec scaled =
        make_lipschitz_spec(spec.l_f(), spec.l_g(), spec.beta_norm(), spec.g_sup(), ubox,
                            GronwallForm::kReachScaled);
    double ratio_scaled = 0.0;
    const int ok_scaled = error_bound_check(scaled, 1000, &ratio_scaled);
    std::printf("      note: with gronwall_form = reach-scaled, %d / 1000 steps (max |e|/E = %.3g)\n",
                ok_scaled, ratio_scaled);
  }

  // 5. Derivative deviation bound.
  {
    int ok = 0;
    const int total = 10000;
    for (int i = 0; i < total; ++i) {
      const Vector x = oracle::uniform_in(op.lo, op.hi, rng);
      const Vector xp = oracle::uniform_in(op.lo, op.hi, rng);
      const double u = u_dist(rng);
      const double dev = (oracle::motor_rate(x, u) - oracle::motor_rate(xp, u)).norm();
      if (dev <= derivative_deviation_bound(x, xp, scalar(u), spec)) ++ok;
    }
    report(5, ok == total, fmt("%.0f / %.0f pairs bounded", ok, total));
  }

  // 6. Constraint solver against a grid scan.
  {
    int ok = 0;
    int single = 0;
    int nonempty = 0;
    const int total = 1000;
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < total; ++k) {
      const auto n = static_cast<Eigen::Index>(1 + rng() % 3);
      ConstraintData c;
      c.xdot = Vector(n);
      c.grad = Vector(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        c.xdot(i) = 3.0 * normal(rng);
        c.grad(i) = normal(rng);
      }
      c.l_h = c.grad.norm() * (1.0 + unit(rng));
      c.grad_dot_xdot = c.grad.dot(c.xdot);
      c.grad_dot_ones = c.grad.sum();
      const double p0 = 5.0 * unit(rng);
      double top = -std::numeric_limits<double>::infinity();
      for (int s1 : {1, -1}) {
        for (int s2 : {1, -1}) top = std::max(top, oracle::constraint_value(c, s1, s2, p0));
      }
      c.rhs = top + (4.0 * unit(rng) - 1.0);

      const auto grid = oracle::grid_scan(c, 0.0, 5.0, 1e-4);
      const auto iv = feasible_p_interval(c, 0.0, 5.0);
      if (grid.single_run) ++single;
      bool match;
      if (grid.any) {
        ++nonempty;
        match = iv && std::abs(iv->lo - grid.first) <= 1e-3 && std::abs(iv->hi - grid.last) <= 1e-3;
      } else {
        match = !iv || iv->hi - iv->lo < 2e-4;
      }
      if (match) ++ok;
    }
    report(6, ok == total && single == total,
           fmt("%.0f / %.0f endpoint matches, %.0f single intervals (%.0f nonempty)", ok, total,
               single, nonempty));
  }

  // 7. Synthesized inputs realize p* and satisfy the sufficient condition.
  {
    const Synthesizer synth(samples, cfg.synthesis, spec, barrier);
    int decisions = 0;
    int ok = 0;
    int infeasible = 0;
    double worst_gap = 0.0;
    double worst_slack = std::numeric_limits<double>::infinity();
    for (int draws = 0; decisions < 1000 && draws < 50000; ++draws) {
      const Vector x = oracle::uniform_in(op.lo, op.hi, rng);
      if (barrier.h(x) < 0.0) continue;
      const StepResult r = synth.step(x);
      if (!std::holds_alternative<ControlDecision>(r)) {
        ++infeasible;
        continue;
      }
      const auto& d = std::get<ControlDecision>(r);
      ++decisions;
      const SampleTriple& s = samples[d.sample_index];
      const WBound w = w_bound(x, s, d.u_star, spec);
      const DynamicsInterval iv = dynamics_interval(x, d.u_star, s, spec, op);
      const double e = error_bound(dt, w, iv.center, barrier, spec).total;
      const Vector grad = barrier.grad_h(x);
      const double alpha = barrier.alpha(barrier.h(x));
      const double slack = std::min(grad.dot(iv.center) + w.total * grad.sum() + alpha - e,
                                    grad.dot(iv.center) - w.total * grad.sum() + alpha - e);
      const double gap = std::abs(w.total - d.p_star);
      worst_gap = std::max(worst_gap, gap);
      worst_slack = std::min(worst_slack, slack);
      const bool in_interval = d.p_star >= d.p_interval.lo && d.p_star <= d.p_interval.hi;
      if (gap <= 1e-6 && slack >= -1e-9 && in_interval && ubox.contains(d.u_star)) ++ok;
    }
    report(7, decisions == 1000 && ok == decisions,
           fmt("%.0f / %.0f decisions pass (max |w-p*| %.3g, min slack %.6g)", ok, decisions,
               worst_gap, worst_slack) +
               " [" + std::to_string(infeasible) + " infeasible states skipped]");
  }

  // 8. Closed-form Theta against a grid maximum of theta over U.
  {
    const double grid = oracle::grid_max(
        [&](double u) {
          return oracle::theta_scalar(spec.l_f()(0), spec.l_f()(1), spec.l_g()(0, 0),
                                      spec.l_g()(1, 0), u);
        },
        ubox.lo(0), ubox.hi(0), 10000);
    const double rel = std::abs(spec.theta_max() - grid) / grid;
    report(8, rel <= 1e-9, fmt("Theta %.10g, grid max %.10g, relative error %.3g",
                               spec.theta_max(), grid, rel));
  }

  // 9. Sampling-period sweep trend.
  {
    const std::vector<double> dts{0.002, 0.005, 0.01, 0.02};
    const auto rows = cli::sweep_dt(cfg, samples, dts, cfg.horizon_steps);
    bool pass = rows.size() == dts.size();
    std::string detail;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i > 0) {
        pass = pass && rows[i].gronwall_term > rows[i - 1].gronwall_term &&
               rows[i].feasible_fraction <= rows[i - 1].feasible_fraction;
      }
      detail += fmt("dt=%g: E_g=%.4g feasible=%.4f; ", rows[i].dt, rows[i].gronwall_term,
                    rows[i].feasible_fraction);
    }
    report(9, pass, detail);
  }

  // 10. Determinism of generated files.
  {
    const PipelineRun second = run_pipeline(work / "second");
    bool same = true;
    for (const char* f : {"data/dataset.csv", "synth/trajectory.csv", "synth/diagnostics.csv",
                          "baseline/trajectory.csv", "baseline/diagnostics.csv"}) {
      const std::string a = slurp(first.dir / f);
      same = same && !a.empty() && a == slurp(second.dir / f);
    }
    report(10, same, "dataset, trajectory and diagnostics files byte-identical across two runs");
  }

  fs::remove_all(work);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
