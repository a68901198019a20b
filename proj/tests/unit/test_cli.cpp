#include "sdcbf/cli.hpp"
#include "sdcbf/errors.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <sys/wait.h>

using namespace sdcbf;
using namespace sdcbf::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::map<std::string, std::string> key_values(const fs::path& p) {
  std::map<std::string, std::string> kv;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

struct Workspace {
  fs::path root;
  explicit Workspace(const std::string& name) : root(fs::temp_directory_path() / name) {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Workspace() { fs::remove_all(root); }

  fs::path config(const std::string& kappa = "1e5", std::size_t n_traj = 30,
                  const std::string& dt = "0.01", const std::string& name = "exp.cfg") const {
    const fs::path p = root / name;
    std::ofstream out(p);
    out << "plant = dc_motor\nseed = 3\n"
        << "[synthesis]\ndt = " << dt
        << "\ninput_lo = -4\ninput_hi = 4\ncost_matrix = 1\n"
        << "state_lo = -1, -1.5\nstate_hi = 1, 1.5\n"
        << "[lipschitz]\nl_f = 39.3153, 1.6599\nl_g = 32.2293; 22.9478\n"
        << "beta_norm = 268.3\ng_sup = 53.52\n"
        << "[barrier]\ntype = quadratic_bound\ncomponent = 0\nradius = 1\nkappa = " << kappa
        << "\n[run]\nx0 = 0.5, 0.75\nhorizon_steps = 100\n"
        << "[dataset]\nn_traj = " << n_traj << "\nn_steps = 500\n";
    return p;
  }
};

int run_binary(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(SDCBF_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("gen-data, run, compare and sweep-dt produce their files") {
  Workspace ws("sdcbf_cli_pipeline");
  const auto cfg = ws.config();
  std::ostringstream log;

  REQUIRE(cmd_gen_data({cfg, ws.root / "data", std::nullopt}, log) == kExitOk);
  const fs::path dataset = ws.root / "data" / "dataset.csv";
  REQUIRE(fs::exists(dataset));
  const auto manifest = nlohmann::json::parse(slurp(ws.root / "data" / "manifest.json"));
  CHECK(manifest["command"] == "gen-data");
  CHECK(manifest["seed"] == 3);
  CHECK(manifest["tool_version"] == kToolVersion);
  CHECK(manifest.contains("timestamp"));

  RunOptions run;
  run.config = cfg;
  run.dataset = dataset;
  run.out = ws.root / "synth";
  CHECK(cmd_run(run, log) == kExitOk);
  auto summary = key_values(ws.root / "synth" / "summary.txt");
  CHECK(summary["controller"] == "synth");
  CHECK(summary["steps"] == "100");
  CHECK(std::stod(summary["min_h"]) >= 0.0);

  run.controller = "baseline";
  run.dataset.clear();
  run.out = ws.root / "base";
  CHECK(cmd_run(run, log) == kExitOk);
  summary = key_values(ws.root / "base" / "summary.txt");
  CHECK(summary["controller"] == "baseline");

  CompareOptions cmp;
  cmp.traj_a = ws.root / "synth" / "trajectory.csv";
  cmp.traj_b = ws.root / "base" / "trajectory.csv";
  cmp.out = ws.root / "cmp";
  cmp.config = cfg;
  CHECK(cmd_compare(cmp, log) == kExitOk);
  const auto cmp_kv = key_values(ws.root / "cmp" / "compare.txt");
  CHECK(cmp_kv.at("a.rows") == "10001");
  CHECK(cmp_kv.count("b.mean_boundary_distance") == 1);
  const std::string svg = slurp(ws.root / "cmp" / "compare.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);

  SweepOptions sweep{cfg, dataset, ws.root / "sweep", {0.005, 0.01}, 50};
  CHECK(cmd_sweep_dt(sweep, log) == kExitOk);
  const std::string table = slurp(ws.root / "sweep" / "sweep.csv");
  CHECK(table.rfind("dt,gronwall_term,feasible_fraction,min_h,steps\n", 0) == 0);
  CHECK(table.find("\n0.005,") != std::string::npos);
}

TEST_CASE("reruns are byte-identical apart from the manifest timestamp") {
  Workspace ws("sdcbf_cli_determinism");
  const auto cfg = ws.config("1e5", 10);
  std::ostringstream log;
  for (const char* tag : {"a", "b"}) {
    const fs::path dir = ws.root / tag;
    REQUIRE(cmd_gen_data({cfg, dir, std::nullopt}, log) == kExitOk);
    RunOptions run;
    run.config = cfg;
    run.dataset = dir / "dataset.csv";
    run.out = dir / "run";
    run.fallback = FallbackPolicy::kReuseNearestSampleInput;
    cmd_run(run, log);
  }
  for (const char* file : {"dataset.csv", "run/trajectory.csv", "run/diagnostics.csv",
                           "run/summary.txt"}) {
    CHECK(slurp(ws.root / "a" / file) == slurp(ws.root / "b" / file));
  }
  auto ma = nlohmann::json::parse(slurp(ws.root / "a" / "manifest.json"));
  auto mb = nlohmann::json::parse(slurp(ws.root / "b" / "manifest.json"));
  ma.erase("timestamp");
  mb.erase("timestamp");
  for (const char* k : {"output_dir", "dataset_path"}) {
    ma.erase(k);
    mb.erase(k);
  }
  CHECK(ma == mb);

  GenDataOptions other{cfg, ws.root / "c", 4};
  REQUIRE(cmd_gen_data(other, log) == kExitOk);
  CHECK(slurp(ws.root / "a" / "dataset.csv") != slurp(ws.root / "c" / "dataset.csv"));
}

TEST_CASE("exit codes") {
  Workspace ws("sdcbf_cli_exit");
  std::ostringstream log;
  std::ostringstream err;

  const auto zero = ws.config("1e5", 0);
  CHECK(guarded([&] { return cmd_gen_data({zero, ws.root / "z", std::nullopt}, log); }, err) ==
        kExitConfig);

  const auto cfg = ws.config();
  RunOptions missing;
  missing.config = cfg;
  missing.dataset = ws.root / "none.csv";
  missing.out = ws.root / "m";
  CHECK(guarded([&] { return cmd_run(missing, log); }, err) == kExitError);

  REQUIRE(cmd_gen_data({cfg, ws.root / "data", std::nullopt}, log) == kExitOk);
  const auto weak = ws.config("1", 30, "0.01", "weak.cfg");
  RunOptions stopped;
  stopped.config = weak;
  stopped.dataset = ws.root / "data" / "dataset.csv";
  stopped.out = ws.root / "stop";
  CHECK(cmd_run(stopped, log) == kExitInfeasible);
  CHECK(key_values(ws.root / "stop" / "summary.txt")["status"] == "stopped_infeasible");

  // A narrow safe set around a state that drifts out of it under the fallback input.
  const auto narrow = ws.config("1", 30, "0.01", "narrow.cfg");
  std::string text = slurp(narrow);
  text.replace(text.find("radius = 1"), 10, "radius = 0.3");
  text.replace(text.find("x0 = 0.5"), 8, "x0 = 0.25");
  std::ofstream(narrow) << text;
  RunOptions unsafe;
  unsafe.config = narrow;
  unsafe.dataset = ws.root / "data" / "dataset.csv";
  unsafe.fallback = FallbackPolicy::kReuseNearestSampleInput;
  unsafe.out = ws.root / "unsafe";
  CHECK(cmd_run(unsafe, log) == kExitUnsafe);
  CHECK(key_values(ws.root / "unsafe" / "summary.txt").count("first_violation_time") == 1);
}

TEST_CASE("command-line binary") {
  Workspace ws("sdcbf_cli_binary");
  const fs::path log = ws.root / "log.txt";
  CHECK(run_binary("--help", log) == 0);
  const std::string help = slurp(log);
  CHECK(help.find("diagnostics.csv") != std::string::npos);
  CHECK(help.find("margin_pp") != std::string::npos);
  CHECK(help.find("beta_norm") != std::string::npos);

  CHECK(run_binary("run --config " + (ws.root / "absent.cfg").string() + " --out " +
                       (ws.root / "o").string(),
                   log) == kExitConfig);
  CHECK(run_binary("frobnicate", log) == kExitConfig);

  const auto cfg = ws.config("1e5", 5);
  CHECK(run_binary("gen-data --config " + cfg.string() + " --out " + (ws.root / "d").string() +
                       " --seed 12",
                   log) == 0);
  const auto manifest = nlohmann::json::parse(slurp(ws.root / "d" / "manifest.json"));
  CHECK(manifest["seed"] == 12);
  CHECK(run_binary("run --config " + cfg.string() + " --controller baseline --horizon 20 --out " +
                       (ws.root / "b").string(),
                   log) == 0);
  CHECK(key_values(ws.root / "b" / "summary.txt")["steps"] == "20");
  CHECK(run_binary("sweep-dt --config " + cfg.string() + " --dataset " +
                       (ws.root / "d" / "dataset.csv").string() + " --dt 0.005,0.01 --horizon 20" +
                       " --out " + (ws.root / "s").string(),
                   log) == 0);
}
