#include "sdcbf/cli.hpp"
#include "sdcbf/config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
  using namespace sdcbf;
  using namespace sdcbf::cli;

  CLI::App app{"Sampled-data CBF controller synthesis from trajectory data"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.footer(std::string(csv_columns_help()) + "\n" + config_schema_help());

  GenDataOptions gen;
  std::uint64_t gen_seed = 0;
  auto* gen_cmd = app.add_subcommand("gen-data", "Simulate random trajectories into dataset.csv");
  gen_cmd->add_option("--config", gen.config, "Experiment config file")->required();
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  auto* seed_opt = gen_cmd->add_option("--seed", gen_seed, "Override the config seed");

  RunOptions run;
  double run_dt = 0.0;
  std::size_t run_horizon = 0;
  std::string run_fallback;
  auto* run_cmd = app.add_subcommand("run", "Closed-loop run with one controller");
  run_cmd->add_option("--config", run.config, "Experiment config file")->required();
  run_cmd->add_option("--dataset", run.dataset, "dataset.csv (synth controller)");
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  run_cmd->add_option("--controller", run.controller, "synth or baseline")
      ->check(CLI::IsMember({"synth", "baseline"}))
      ->capture_default_str();
  auto* dt_opt = run_cmd->add_option("--dt", run_dt, "Override the sampling period");
  auto* horizon_opt = run_cmd->add_option("--horizon", run_horizon, "Number of sampling periods");
  auto* fallback_opt = run_cmd->add_option("--fallback", run_fallback,
                                           "fail-stop or reuse-nearest-sample-input")
                           ->check(CLI::IsMember({"fail-stop", "reuse-nearest-sample-input"}));

  CompareOptions cmp;
  std::string cmp_config;
  auto* cmp_cmd = app.add_subcommand("compare", "Compare two trajectory.csv files");
  cmp_cmd->add_option("traj_a", cmp.traj_a, "First trajectory.csv")->required();
  cmp_cmd->add_option("traj_b", cmp.traj_b, "Second trajectory.csv")->required();
  cmp_cmd->add_option("--out", cmp.out, "Output directory")->required();
  auto* cmp_config_opt = cmp_cmd->add_option("--config", cmp_config, "Config for the barrier");
  cmp_cmd->add_option("--label-a", cmp.label_a)->capture_default_str();
  cmp_cmd->add_option("--label-b", cmp.label_b)->capture_default_str();

  SweepOptions sweep;
  std::size_t sweep_horizon = 0;
  auto* sweep_cmd = app.add_subcommand("sweep-dt", "Feasibility and safety versus sampling period");
  sweep_cmd->add_option("--config", sweep.config, "Experiment config file")->required();
  sweep_cmd->add_option("--dataset", sweep.dataset, "dataset.csv")->required();
  sweep_cmd->add_option("--out", sweep.out, "Output directory")->required();
  sweep_cmd->add_option("--dt", sweep.dts, "Sampling periods, e.g. --dt 0.001 0.005 0.01")
      ->required()
      ->delimiter(',');
  auto* sweep_horizon_opt = sweep_cmd->add_option(
      "--horizon", sweep_horizon, "Run length in config sampling periods");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (gen_cmd->parsed()) {
    if (*seed_opt) gen.seed = gen_seed;
    return guarded([&] { return cmd_gen_data(gen, std::cout); }, std::cerr);
  }
  if (run_cmd->parsed()) {
    return guarded(
        [&] {
          if (*dt_opt) run.dt = run_dt;
          if (*horizon_opt) run.horizon = run_horizon;
          if (*fallback_opt) run.fallback = parse_fallback(run_fallback);
          return cmd_run(run, std::cout);
        },
        std::cerr);
  }
  if (cmp_cmd->parsed()) {
    if (*cmp_config_opt) cmp.config = cmp_config;
    return guarded([&] { return cmd_compare(cmp, std::cout); }, std::cerr);
  }
  if (*sweep_horizon_opt) sweep.horizon = sweep_horizon;
  return guarded([&] { return cmd_sweep_dt(sweep, std::cout); }, std::cerr);
}
