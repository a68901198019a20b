#include "sdcbf/cli.hpp"

#include "sdcbf/bounds.hpp"
#include "sdcbf/csv.hpp"
#include "sdcbf/errors.hpp"
#include "sdcbf/svg.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <future>
#include <limits>

namespace sdcbf::cli {

namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

RunResult run_synthesized(const ControlAffinePlant& plant, const ExperimentConfig& cfg,
                          const SampleSet& samples, double dt, std::size_t horizon,
                          FallbackPolicy fallback) {
  SynthesisConfig sc = cfg.synthesis;
  sc.dt = dt;
  const BarrierSpec barrier = cfg.barrier_spec();
  Synthesizer synth(samples, sc, cfg.lipschitz_spec(), barrier);
  SynthesizedController controller(synth, fallback);
  return run_closed_loop(plant, controller, cfg.x0, dt, horizon, sc, barrier);
}

}  // namespace

void write_manifest(const RunManifest& manifest, const fs::path& dir) {
  nlohmann::json j;
  j["command"] = manifest.command;
  j["config_path"] = manifest.config_path;
  j["dataset_path"] = manifest.dataset_path;
  j["output_dir"] = manifest.output_dir;
  j["seed"] = manifest.seed;
  j["tool_version"] = manifest.tool_version;
  j["timestamp"] = utc_timestamp();
  auto out = open_out(dir / "manifest.json");
  out << j.dump(2) << '\n';
}

int cmd_gen_data(const GenDataOptions& opts, std::ostream& log) {
  ExperimentConfig cfg = load_config(opts.config);
  if (opts.seed) cfg.seed = *opts.seed;
  const auto plant = make_plant(cfg.plant);
  const BarrierSpec barrier = cfg.barrier_spec();
  ensure_dir(opts.out);

  const SampleSet samples =
      generate_dataset(*plant, cfg.n_traj, cfg.n_steps, cfg.synthesis.dt,
                       uniform_input_sampler(cfg.synthesis.input_box), barrier, cfg.seed,
                       cfg.synthesis.substeps, cfg.synthesis.operating_box);
  const DatasetReport report = validate_dataset(samples, barrier, cfg.synthesis);
  write_dataset_csv(samples, opts.out / "dataset.csv");
  write_manifest({opts.config.string(), (opts.out / "dataset.csv").string(), opts.out.string(),
                  cfg.seed, "gen-data"},
                 opts.out);
  log << "wrote " << samples.size() << " samples (" << report.valid << " valid, "
      << report.flagged.size() << " flagged) to " << (opts.out / "dataset.csv").string() << '\n';
  if (samples.size() == 0) throw DatasetError("generated dataset is empty");
  return kExitOk;
}

int cmd_run(const RunOptions& opts, std::ostream& log) {
  ExperimentConfig cfg = load_config(opts.config);
  if (opts.dt) cfg.synthesis.dt = *opts.dt;
  if (opts.horizon) cfg.horizon_steps = *opts.horizon;
  if (opts.fallback) cfg.synthesis.fallback = *opts.fallback;
  cfg.validate();
  if (opts.controller != "synth" && opts.controller != "baseline") {
    throw ConfigError("unknown controller '" + opts.controller + "' (expected synth or baseline)");
  }
  const auto plant = make_plant(cfg.plant);
  const BarrierSpec barrier = cfg.barrier_spec();
  ensure_dir(opts.out);

  RunResult result;
  if (opts.controller == "synth") {
    if (opts.dataset.empty()) throw Error("the synth controller needs --dataset");
    if (!fs::exists(opts.dataset)) throw Error("dataset not found: " + opts.dataset.string());
    const SampleSet samples = read_dataset_csv(opts.dataset);
    if (samples.state_dim() != plant->state_dim() || samples.input_dim() != plant->input_dim()) {
      throw DimensionError("dataset dimensions do not match the plant");
    }
    result = run_synthesized(*plant, cfg, samples, cfg.synthesis.dt, cfg.horizon_steps,
                             cfg.synthesis.fallback);
  } else {
    BaselineController controller(*plant, barrier, cfg.synthesis);
    result = run_closed_loop(*plant, controller, cfg.x0, cfg.synthesis.dt, cfg.horizon_steps,
                             cfg.synthesis, barrier);
  }

  write_trajectory_csv(result.trajectory, barrier, opts.out / "trajectory.csv");
  write_diagnostics_csv(result.steps, plant->input_dim(), opts.out / "diagnostics.csv");

  std::size_t synthesized = 0;
  std::size_t fallback = 0;
  for (const auto& s : result.steps) {
    if (s.output.status == StepStatus::kSynthesized) ++synthesized;
    if (s.output.status == StepStatus::kFallback) ++fallback;
  }
  const SafetyReport safety = safety_monitor(result.trajectory, barrier);
  const bool stopped = result.status == RunStatus::kStoppedInfeasible;
  {
    auto out = open_out(opts.out / "summary.txt");
    out << "controller=" << opts.controller << '\n'
        << "status=" << (stopped ? "stopped_infeasible" : "completed") << '\n'
        << "steps=" << result.steps.size() << '\n'
        << "synthesized_steps=" << synthesized << '\n'
        << "fallback_steps=" << fallback << '\n'
        << "min_h=" << format_double(safety.min_h) << '\n'
        << "left_operating_box=" << (result.trajectory.left_operating_box ? 1 : 0) << '\n';
    if (safety.first_violation_time) {
      out << "first_violation_time=" << format_double(*safety.first_violation_time) << '\n';
    }
  }
  write_manifest({opts.config.string(), opts.dataset.string(), opts.out.string(), cfg.seed,
                  "run --controller " + opts.controller},
                 opts.out);

  log << opts.controller << ": " << result.steps.size() << " steps, min h = " << safety.min_h;
  if (stopped) log << ", stopped (no feasible input)";
  log << '\n';
  if (safety.min_h < 0.0) {
    log << "safety violation at t = " << *safety.first_violation_time << '\n';
    return kExitUnsafe;
  }
  return stopped ? kExitInfeasible : kExitOk;
}

int cmd_compare(const CompareOptions& opts, std::ostream& log) {
  std::size_t component = 0;
  double radius = 1.0;
  if (opts.config) {
    const ExperimentConfig cfg = load_config(*opts.config);
    component = cfg.barrier.component;
    radius = cfg.barrier.radius;
  }
  const TrajectoryTable a = read_trajectory_csv(opts.traj_a);
  const TrajectoryTable b = read_trajectory_csv(opts.traj_b);
  if (a.state_dim != b.state_dim) throw DimensionError("trajectories have different state sizes");
  if (component >= a.state_dim) throw ConfigError("barrier component outside the state");
  ensure_dir(opts.out);

  const std::size_t common = std::min(a.t.size(), b.t.size());
  double max_dx = 0.0;
  double max_dh = 0.0;
  for (std::size_t i = 0; i < common; ++i) {
    max_dx = std::max(max_dx, (a.x[i] - b.x[i]).norm());
    max_dh = std::max(max_dh, std::abs(a.h[i] - b.h[i]));
  }

  auto stats = [&](const TrajectoryTable& t, std::ostream& out, const std::string& key) {
    double min_h = std::numeric_limits<double>::infinity();
    double sum_h = 0.0;
    double sum_d = 0.0;
    for (std::size_t i = 0; i < t.t.size(); ++i) {
      min_h = std::min(min_h, t.h[i]);
      sum_h += t.h[i];
      sum_d += radius - std::abs(t.x[i](static_cast<Eigen::Index>(component)));
    }
    const double n = static_cast<double>(std::max<std::size_t>(1, t.t.size()));
    out << key << ".rows=" << t.t.size() << '\n'
        << key << ".min_h=" << format_double(min_h) << '\n'
        << key << ".mean_h=" << format_double(sum_h / n) << '\n'
        << key << ".mean_boundary_distance=" << format_double(sum_d / n) << '\n';
  };

  {
    auto out = open_out(opts.out / "compare.txt");
    out << "a=" << opts.label_a << '\n' << "b=" << opts.label_b << '\n';
    stats(a, out, "a");
    stats(b, out, "b");
    out << "common_rows=" << common << '\n'
        << "max_state_difference=" << format_double(max_dx) << '\n'
        << "max_h_difference=" << format_double(max_dh) << '\n';
  }
  {
    auto out = open_out(opts.out / "compare.svg");
    out << render_comparison_svg({&a, opts.label_a, "#1f5fbf", ""},
                                 {&b, opts.label_b, "#c0392b", "8,3,2,3"}, component, radius);
  }
  write_manifest({opts.config ? opts.config->string() : "", "", opts.out.string(), 0, "compare"},
                 opts.out);
  log << "max state difference " << max_dx << " over " << common << " rows\n";
  return kExitOk;
}

std::vector<SweepRow> sweep_dt(const ExperimentConfig& cfg, const SampleSet& samples,
                               const std::vector<double>& dts, std::size_t horizon_steps) {
  const double duration = static_cast<double>(horizon_steps) * cfg.synthesis.dt;
  std::vector<std::future<SweepRow>> jobs;
  jobs.reserve(dts.size());
  for (double dt : dts) {
    if (!(dt > 0.0)) throw ConfigError("sweep dt values must be positive");
    jobs.push_back(std::async(std::launch::async, [&cfg, &samples, dt, duration] {
      const auto plant = make_plant(cfg.plant);
      const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
      const RunResult r = run_synthesized(*plant, cfg, samples, dt, std::max<std::size_t>(1, steps),
                                          FallbackPolicy::kReuseNearestSampleInput);
      SweepRow row;
      row.dt = dt;
      row.gronwall_term = gronwall_term(dt, cfg.barrier_spec(), cfg.lipschitz_spec());
      std::size_t ok = 0;
      for (const auto& s : r.steps) {
        if (s.output.status == StepStatus::kSynthesized) ++ok;
      }
      row.steps = r.steps.size();
      row.feasible_fraction =
          r.steps.empty() ? 0.0 : static_cast<double>(ok) / static_cast<double>(r.steps.size());
      row.min_h = r.trajectory.min_h;
      return row;
    }));
  }
  std::vector<SweepRow> rows;
  rows.reserve(jobs.size());
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

int cmd_sweep_dt(const SweepOptions& opts, std::ostream& log) {
  const ExperimentConfig cfg = load_config(opts.config);
  if (opts.dts.empty()) throw ConfigError("sweep-dt needs at least one --dt value");
  if (opts.dataset.empty() || !fs::exists(opts.dataset)) {
    throw Error("dataset not found: " + opts.dataset.string());
  }
  const SampleSet samples = read_dataset_csv(opts.dataset);
  ensure_dir(opts.out);
  const auto rows = sweep_dt(cfg, samples, opts.dts, opts.horizon.value_or(cfg.horizon_steps));

  auto out = open_out(opts.out / "sweep.csv");
  write_csv_row(out, std::vector<std::string>{"dt", "gronwall_term", "feasible_fraction", "min_h",
                                              "steps"});
  for (const auto& r : rows) {
    write_csv_row(out, std::vector<double>{r.dt, r.gronwall_term, r.feasible_fraction, r.min_h,
                                           static_cast<double>(r.steps)});
    log << "dt=" << r.dt << " E=" << r.gronwall_term << " feasible=" << r.feasible_fraction
        << " min_h=" << r.min_h << '\n';
  }
  write_manifest({opts.config.string(), opts.dataset.string(), opts.out.string(), cfg.seed,
                  "sweep-dt"},
                 opts.out);
  return kExitOk;
}

const char* csv_columns_help() {
  return "CSV files:\n"
         "  dataset.csv     t_start,t_end,x_start_0..,u_held_0..,x_end_0..\n"
         "  trajectory.csv  t,x_0..,u_0..,h   (fine resolution; u is the held input)\n"
         "  diagnostics.csv t,h,p_star,ball_radius,u_0..,margin_pp,margin_pm,margin_mp,\n"
         "                  margin_mm,gronwall_term,status\n"
         "                  status: 0 synthesized, 1 fallback, 2 baseline, 3 stopped\n"
         "  sweep.csv       dt,gronwall_term,feasible_fraction,min_h,steps\n"
         "Missing values are written as nan.\n";
}

}  // namespace sdcbf::cli
