#include "sdcbf/config.hpp"

#include "sdcbf/errors.hpp"

#include <boost/program_options.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace po = boost::program_options;

namespace sdcbf {

std::string to_string(FallbackPolicy p) {
  return p == FallbackPolicy::kFailStop ? "fail-stop" : "reuse-nearest-sample-input";
}

FallbackPolicy parse_fallback(const std::string& s) {
  if (s == "fail-stop") return FallbackPolicy::kFailStop;
  if (s == "reuse-nearest-sample-input") return FallbackPolicy::kReuseNearestSampleInput;
  throw ConfigError("unknown fallback policy '" + s + "'");
}

void SynthesisConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be > 0");
  if (substeps < 1) throw ConfigError("substeps must be >= 1");
  if (input_box.dim() == 0) throw ConfigError("input box is empty");
  if (operating_box.dim() == 0) throw ConfigError("operating box is empty");
  // Box's constructor already rejects lo > hi; a default-constructed box with
  // mismatched sizes is caught here.
  if (input_box.lo.size() != input_box.hi.size() ||
      operating_box.lo.size() != operating_box.hi.size()) {
    throw ConfigError("box bounds have different dimensions");
  }
  const auto m = static_cast<Eigen::Index>(input_box.dim());
  if (cost_matrix.rows() != m || cost_matrix.cols() != m) {
    throw ConfigError("cost_matrix must be m x m");
  }
  if (!cost_matrix.isApprox(cost_matrix.transpose(), 1e-12)) {
    throw ConfigError("cost_matrix must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cost_matrix);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw ConfigError("cost_matrix must be positive definite");
  }
}

void ExperimentConfig::validate() const {
  synthesis.validate();
  if (n_traj == 0) throw ConfigError("dataset.n_traj must be >= 1");
  if (n_steps == 0) throw ConfigError("dataset.n_steps must be >= 1");
  if (static_cast<std::size_t>(x0.size()) != synthesis.operating_box.dim()) {
    throw ConfigError("run.x0 must match the state dimension");
  }
  if (static_cast<std::size_t>(lipschitz.l_f.size()) != synthesis.operating_box.dim()) {
    throw ConfigError("lipschitz.l_f must match the state dimension");
  }
  // Surfaces dimension and sign problems of the constants as config errors.
  try {
    (void)lipschitz_spec();
    (void)barrier_spec();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (!synthesis.operating_box.contains(x0)) throw ConfigError("run.x0 is outside the operating box");
  if (barrier_spec().h(x0) < 0.0) throw ConfigError("run.x0 is outside the safe set");
}

LipschitzSpec ExperimentConfig::lipschitz_spec() const {
  return make_lipschitz_spec(lipschitz.l_f, lipschitz.l_g, lipschitz.beta_norm, lipschitz.g_sup,
                             synthesis.input_box, lipschitz.form);
}

BarrierSpec ExperimentConfig::barrier_spec() const {
  if (barrier.type != "quadratic_bound") {
    throw ConfigError("unknown barrier type '" + barrier.type + "'");
  }
  return make_quadratic_bound_barrier(barrier.component, barrier.radius, synthesis.operating_box,
                                      barrier.kappa, barrier.mode);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + text + "' is not a number");
  }
  if (used != t.size()) throw ConfigError(key + ": '" + text + "' is not a number");
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(key, item));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

Vector parse_vector(const std::string& key, const std::string& text) {
  const auto v = parse_list(key, text);
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Matrix parse_matrix(const std::string& key, const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) rows.push_back(parse_list(key, row));
  if (rows.empty()) throw ConfigError(key + ": empty matrix");
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) throw ConfigError(key + ": ragged matrix rows");
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return out;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  if (v < 0.0 || v != std::floor(v)) throw ConfigError(key + " must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

Box parse_box(const std::string& key, const std::string& lo, const std::string& hi) {
  try {
    return Box(parse_vector(key + "_lo", lo), parse_vector(key + "_hi", hi));
  } catch (const DimensionError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  po::options_description desc;
  // All values are read as strings and converted below so that error messages
  // can name the offending key.
  const char* keys[] = {
      "plant",
      "seed",
      "synthesis.dt",
      "synthesis.input_lo",
      "synthesis.input_hi",
      "synthesis.cost_matrix",
      "synthesis.state_lo",
      "synthesis.state_hi",
      "synthesis.substeps",
      "synthesis.fallback",
      "lipschitz.l_f",
      "lipschitz.l_g",
      "lipschitz.beta_norm",
      "lipschitz.g_sup",
      "lipschitz.gronwall_form",
      "barrier.type",
      "barrier.component",
      "barrier.radius",
      "barrier.kappa",
      "barrier.alpha_lipschitz",
      "run.x0",
      "run.horizon_steps",
      "dataset.n_traj",
      "dataset.n_steps",
  };
  for (const char* k : keys) desc.add_options()(k, po::value<std::string>());

  po::variables_map vm;
  try {
    po::store(po::parse_config_file(in, desc, false), vm);
  } catch (const po::error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  auto get = [&](const std::string& key) -> std::string {
    if (!vm.count(key)) throw ConfigError("config: missing key '" + key + "'");
    return trim(vm[key].as<std::string>());
  };
  auto get_or = [&](const std::string& key, const std::string& fallback) -> std::string {
    return vm.count(key) ? trim(vm[key].as<std::string>()) : fallback;
  };

  ExperimentConfig cfg;
  cfg.plant = get_or("plant", "dc_motor");
  cfg.seed = parse_count("seed", get_or("seed", "0"));

  auto& syn = cfg.synthesis;
  syn.dt = parse_number("synthesis.dt", get("synthesis.dt"));
  syn.input_box = parse_box("synthesis.input", get("synthesis.input_lo"),
                            get("synthesis.input_hi"));
  syn.operating_box = parse_box("synthesis.state", get("synthesis.state_lo"),
                                get("synthesis.state_hi"));
  syn.cost_matrix = vm.count("synthesis.cost_matrix")
                        ? parse_matrix("synthesis.cost_matrix", get("synthesis.cost_matrix"))
                        : Matrix::Identity(syn.input_box.lo.size(), syn.input_box.lo.size());
  syn.substeps = static_cast<int>(parse_count("synthesis.substeps",
                                              get_or("synthesis.substeps", "100")));
  syn.fallback = parse_fallback(get_or("synthesis.fallback", "fail-stop"));

  auto& lip = cfg.lipschitz;
  lip.l_f = parse_vector("lipschitz.l_f", get("lipschitz.l_f"));
  lip.l_g = parse_matrix("lipschitz.l_g", get("lipschitz.l_g"));
  lip.beta_norm = parse_number("lipschitz.beta_norm", get("lipschitz.beta_norm"));
  lip.g_sup = parse_number("lipschitz.g_sup", get("lipschitz.g_sup"));
  const auto form = get_or("lipschitz.gronwall_form", "unscaled-alpha");
  if (form == "unscaled-alpha") {
    lip.form = GronwallForm::kUnscaledAlpha;
  } else if (form == "reach-scaled") {
    lip.form = GronwallForm::kReachScaled;
  } else {
    throw ConfigError("lipschitz.gronwall_form must be 'unscaled-alpha' or 'reach-scaled'");
  }

  auto& bar = cfg.barrier;
  bar.type = get_or("barrier.type", "quadratic_bound");
  bar.component = parse_count("barrier.component", get_or("barrier.component", "0"));
  bar.radius = parse_number("barrier.radius", get_or("barrier.radius", "1"));
  bar.kappa = parse_number("barrier.kappa", get_or("barrier.kappa", "1"));
  const auto mode = get_or("barrier.alpha_lipschitz", "composite");
  if (mode == "composite") {
    bar.mode = AlphaLipschitzMode::kComposite;
  } else if (mode == "strict") {
    bar.mode = AlphaLipschitzMode::kStrict;
  } else {
    throw ConfigError("barrier.alpha_lipschitz must be 'composite' or 'strict'");
  }

  cfg.x0 = parse_vector("run.x0", get("run.x0"));
  cfg.horizon_steps = parse_count("run.horizon_steps", get_or("run.horizon_steps", "1000"));
  cfg.n_traj = parse_count("dataset.n_traj", get_or("dataset.n_traj", "200"));
  cfg.n_steps = parse_count("dataset.n_steps", get_or("dataset.n_steps", "1000"));

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_config(in);
}

const char* config_schema_help() {
  return R"(Config file (key = value, INI sections, '#' comments):
  plant = dc_motor                    built-in plant
  seed = <uint>                       RNG seed for dataset generation
  [synthesis]
  dt = <s>                            sampling period
  input_lo / input_hi = v,v,...       input box U
  cost_matrix = a,b;c,d               R (rows separated by ';'), default I
  state_lo / state_hi = v,v,...       operating box for the bound constants
  substeps = <int>                    RK4 substeps per period (default 100)
  fallback = fail-stop | reuse-nearest-sample-input
  [lipschitz]
  l_f = v,...                         Lipschitz constant of each f_j
  l_g = row;row;...                   n x m constants of g_{j,s}
  beta_norm = <v>                     sup ||f(x)+g(x)u||_2 over box x U
  g_sup = <v>                         sup ||g(x)||_2 over box
  gronwall_form = unscaled-alpha | reach-scaled
  [barrier]
  type = quadratic_bound              h(x) = radius^2 - x[component]^2
  component = <int>, radius = <v>
  kappa = <v>                         alpha(h) = kappa * h
  alpha_lipschitz = composite | strict
  [run]
  x0 = v,...                          initial state
  horizon_steps = <int>               closed-loop sampling periods
  [dataset]
  n_traj = <int>, n_steps = <int>     random trajectories x periods
)";
}

}  // namespace sdcbf
