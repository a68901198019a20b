#include "sdcbf/lipschitz.hpp"

#include "sdcbf/bounds.hpp"
#include "sdcbf/errors.hpp"

#include <cmath>

namespace sdcbf {

namespace {

void require_nonnegative(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) {
    throw ConfigError(std::string(what) + " must be finite and >= 0");
  }
}

}  // namespace

LipschitzSpec make_lipschitz_spec(Vector l_f, Matrix l_g, double beta_norm, double g_sup,
                                  const Box& input_box, GronwallForm form) {
  if (l_f.size() == 0) throw DimensionError("l_f is empty");
  if (l_g.rows() != l_f.size()) {
    throw DimensionError("l_g must have one row per state component");
  }
  if (static_cast<std::size_t>(l_g.cols()) != input_box.dim() || l_g.cols() == 0) {
    throw DimensionError("l_g must have one column per input component");
  }
  for (Eigen::Index i = 0; i < l_f.size(); ++i) require_nonnegative(l_f[i], "l_f entry");
  for (Eigen::Index i = 0; i < l_g.size(); ++i) require_nonnegative(l_g.data()[i], "l_g entry");
  require_nonnegative(beta_norm, "beta_norm");
  require_nonnegative(g_sup, "g_sup");

  LipschitzSpec spec;
  spec.l_f_ = std::move(l_f);
  spec.l_g_ = std::move(l_g);
  spec.beta_norm_ = beta_norm;
  spec.g_sup_ = g_sup;
  spec.form_ = form;
  // theta is nondecreasing in every |u_s|, so its maximum over the box sits
  // at the vertex of largest magnitude.
  spec.theta_max_ = theta(input_box.max_abs_vertex(), spec);
  return spec;
}

}  // namespace sdcbf
