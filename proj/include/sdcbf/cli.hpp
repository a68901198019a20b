#pragma once

#include "sdcbf/config.hpp"
#include "sdcbf/sim.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sdcbf::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitConfig = 2,
  kExitInfeasible = 3,
  kExitUnsafe = 4,
};

/// Written as manifest.json into every output directory. The timestamp is the
/// only field that varies between identical runs.
struct RunManifest {
  std::string config_path;
  std::string dataset_path;
  std::string output_dir;
  std::uint64_t seed = 0;
  std::string command;
  std::string tool_version = kToolVersion;
};

void write_manifest(const RunManifest& manifest, const std::filesystem::path& dir);

struct GenDataOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
};

struct RunOptions {
  std::filesystem::path config;
  std::filesystem::path dataset;
  std::filesystem::path out;
  std::string controller = "synth";  // synth | baseline
  std::optional<double> dt;
  std::optional<std::size_t> horizon;
  std::optional<FallbackPolicy> fallback;
};

struct CompareOptions {
  std::filesystem::path traj_a;
  std::filesystem::path traj_b;
  std::filesystem::path out;
  std::optional<std::filesystem::path> config;
  std::string label_a = "synthesized";
  std::string label_b = "baseline";
};

struct SweepOptions {
  std::filesystem::path config;
  std::filesystem::path dataset;
  std::filesystem::path out;
  std::vector<double> dts;
  std::optional<std::size_t> horizon;
};

/// out/dataset.csv
int cmd_gen_data(const GenDataOptions& opts, std::ostream& log);
/// out/trajectory.csv, out/diagnostics.csv, out/summary.txt
int cmd_run(const RunOptions& opts, std::ostream& log);
/// out/compare.txt, out/compare.svg
int cmd_compare(const CompareOptions& opts, std::ostream& log);
/// out/sweep.csv: dt, gronwall_term, feasible_fraction, min_h, steps
int cmd_sweep_dt(const SweepOptions& opts, std::ostream& log);

/// Runs `fn`, mapping ConfigError to kExitConfig and other errors to
/// kExitError (message on `err`).
template <class Fn>
int guarded(Fn&& fn, std::ostream& err);

struct SweepRow {
  double dt = 0.0;
  double gronwall_term = 0.0;
  double feasible_fraction = 0.0;
  double min_h = 0.0;
  std::size_t steps = 0;
};

/// The per-dt experiments behind cmd_sweep_dt; each dt runs on its own thread.
/// The run length is horizon_steps * cfg.synthesis.dt seconds for every dt.
std::vector<SweepRow> sweep_dt(const ExperimentConfig& cfg, const SampleSet& samples,
                               const std::vector<double>& dts, std::size_t horizon_steps);

const char* csv_columns_help();

}  // namespace sdcbf::cli

#include "sdcbf/errors.hpp"

namespace sdcbf::cli {

template <class Fn>
int guarded(Fn&& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace sdcbf::cli
