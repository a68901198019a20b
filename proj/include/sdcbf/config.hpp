#pragma once

#include "sdcbf/barrier.hpp"
#include "sdcbf/lipschitz.hpp"
#include "sdcbf/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace sdcbf {

enum class FallbackPolicy { kFailStop, kReuseNearestSampleInput };

std::string to_string(FallbackPolicy p);
FallbackPolicy parse_fallback(const std::string& s);

struct SynthesisConfig {
  double dt = 0.01;
  Box input_box;
  Matrix cost_matrix;
  Box operating_box;
  int substeps = 100;
  FallbackPolicy fallback = FallbackPolicy::kFailStop;

  /// Throws ConfigError unless dt > 0, substeps >= 1, the boxes are nonempty
  /// and cost_matrix is symmetric positive definite of size m x m.
  void validate() const;
};

struct LipschitzConfig {
  Vector l_f;
  Matrix l_g;
  double beta_norm = 0.0;
  double g_sup = 0.0;
  GronwallForm form = GronwallForm::kUnscaledAlpha;
};

struct BarrierConfig {
  std::string type = "quadratic_bound";
  std::size_t component = 0;
  double radius = 1.0;
  double kappa = 1.0;
  AlphaLipschitzMode mode = AlphaLipschitzMode::kComposite;
};

/// Everything one experiment needs: plant choice, bound constants, barrier,
/// synthesis settings, initial state and dataset shape.
struct ExperimentConfig {
  std::string plant = "dc_motor";
  std::uint64_t seed = 0;
  SynthesisConfig synthesis;
  LipschitzConfig lipschitz;
  BarrierConfig barrier;
  Vector x0;
  std::size_t horizon_steps = 1000;
  std::size_t n_traj = 200;
  std::size_t n_steps = 1000;

  void validate() const;
  LipschitzSpec lipschitz_spec() const;
  BarrierSpec barrier_spec() const;
};

/// Parses the key-value config format (INI sections, '#' comments). Vectors
/// are comma separated; matrix rows are separated by ';'. Unknown keys are
/// rejected. The result is validated.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Human-readable key reference, printed by the CLI.
const char* config_schema_help();

}  // namespace sdcbf
