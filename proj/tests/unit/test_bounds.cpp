#include "sdcbf/bounds.hpp"
#include "sdcbf/errors.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sdcbf;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

LipschitzSpec motor_spec(GronwallForm form = GronwallForm::kUnscaledAlpha) {
  Matrix l_g(2, 1);
  l_g << 32.2293, 22.9478;
  return make_lipschitz_spec(vec({39.3153, 1.6599}), l_g, 268.3, 53.52,
                             Box(vec({-4}), vec({4})), form);
}

const Box kMotorBox(vec({-1, -1.5}), vec({1, 1.5}));

}  // namespace

TEST_CASE("theta on the motor constants") {
  const auto spec = motor_spec();
  CHECK(theta(vec({0}), spec) == doctest::Approx(std::hypot(39.3153, 1.6599)).epsilon(1e-14));
  CHECK(theta(vec({0}), spec) == doctest::Approx(39.3503).epsilon(1e-6));
  CHECK(theta(vec({4}), spec) ==
        doctest::Approx(oracle::theta_scalar(39.3153, 1.6599, 32.2293, 22.9478, 4)).epsilon(1e-14));
  CHECK(theta(vec({-4}), spec) == doctest::Approx(192.45).epsilon(1e-4));
  const auto zero = make_lipschitz_spec(vec({0, 0}), Matrix::Zero(2, 1), 0, 0,
                                        Box(vec({-1}), vec({1})));
  CHECK(theta(vec({0.3}), zero) == 0.0);
}

TEST_CASE("gamma") {
  CHECK(gamma(vec({1.5}), vec({1.5}), 7.0) == 0.0);
  CHECK(gamma(vec({3}), vec({1}), 2.0) == doctest::Approx(4.0));
  CHECK(gamma(vec({3, -1}), vec({0, 3}), 0.0) == 0.0);
  CHECK(gamma(vec({3, 0}), vec({0, 4}), 1.0) == doctest::Approx(5.0));
}

TEST_CASE("reach_radius closed forms") {
  CHECK(reach_radius(0.0, 3.0, 2.0) == 0.0);
  CHECK(reach_radius(1.0, 1.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  CHECK(reach_radius(0.01, 268.3, 0.0) == doctest::Approx(2.683).epsilon(1e-14));
  const auto spec = motor_spec();
  CHECK(reach_radius(0.01, spec) ==
        doctest::Approx(268.3 * std::expm1(spec.theta_max() * 0.01) / spec.theta_max()));
}

TEST_CASE("reach_radius is continuous as Theta goes to zero") {
  for (double th : {1e-12, 1e-13, 1e-15, 0.0}) {
    for (double dt : {1e-3, 0.01, 0.5}) {
      CHECK(std::abs(reach_radius(dt, 3.7, th) - 3.7 * dt) <= 1e-9);
    }
  }
}

TEST_CASE("reach_radius overflow is an error") {
  CHECK_THROWS_AS(reach_radius(1.0, 1.0, 51.0), BoundOverflowError);
  CHECK_NOTHROW(reach_radius(1.0, 1.0, 49.0));
}

TEST_CASE("reach_radius is monotone in dt and Theta") {
  double prev_dt_row = -1.0;
  for (int i = 0; i <= 40; ++i) {
    const double dt = 0.001 * i;
    double prev = -1.0;
    for (int j = 0; j <= 40; ++j) {
      const double th = 5.0 * j;
      const double r = reach_radius(dt, 10.0, th);
      CHECK(r >= prev);
      prev = r;
    }
    const double r = reach_radius(dt, 10.0, 100.0);
    CHECK(r >= prev_dt_row);
    prev_dt_row = r;
  }
}

TEST_CASE("reach radius contains simulated motor segments") {
  const auto spec = motor_spec();
  const double bound = reach_radius(0.01, spec);
  std::mt19937_64 rng(21);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vector x0 = oracle::uniform_in(kMotorBox.lo, kMotorBox.hi, rng);
    const double u = std::uniform_real_distribution<double>(-4, 4)(rng);
    std::vector<Vector> trace;
    oracle::rk4([u](const Vector& x) { return oracle::motor_rate(x, u); }, x0, 0.01, 100, &trace);
    for (const auto& x : trace) worst = std::max(worst, (x - x0).norm());
  }
  CHECK(worst <= bound);
}

TEST_CASE("w_bound terms") {
  const auto spec = motor_spec();
  SampleTriple s{vec({0.4, 0.7}), vec({1.0}), vec({0.41, 0.69}), 0.0, 0.01};

  const WBound same_u = w_bound(vec({0.5, 0.75}), s, vec({1.0}), spec);
  CHECK(same_u.gamma_part == 0.0);
  CHECK(same_u.fixed_part > 0.0);

  // Term-by-term scalar recomputation.
  const double th = oracle::theta_scalar(39.3153, 1.6599, 32.2293, 22.9478, 1.0);
  const double big_theta = oracle::theta_scalar(39.3153, 1.6599, 32.2293, 22.9478, 4.0);
  const double dist = std::hypot(0.1, 0.05);
  const double reach = 268.3 / big_theta * (std::exp(big_theta * 0.01) - 1.0);
  const WBound w = w_bound(vec({0.5, 0.75}), s, vec({-2.0}), spec);
  CHECK(w.fixed_part == doctest::Approx(th * dist + std::sqrt(2.0) * th * reach).epsilon(1e-12));
  CHECK(w.gamma_part == doctest::Approx(53.52 * 3.0).epsilon(1e-14));
  CHECK(w.total == doctest::Approx(w.fixed_part + w.gamma_part).epsilon(1e-14));

  // Vanishing duration at the sample point.
  s.t_end = 1e-14;
  CHECK(w_bound(s.x_start, s, s.u_held, spec).total <= 1e-8);
}

TEST_CASE("error_bound special cases") {
  const auto spec = motor_spec();
  const auto barrier = make_quadratic_bound_barrier(0, 1.0, kMotorBox, 10.0);
  const Vector xdot = vec({3.0, -4.0});
  const ErrorBound e0 = error_bound(0.0, WBound{}, xdot, barrier, spec);
  CHECK(e0.gronwall_term == 0.0);
  CHECK(e0.total == doctest::Approx(2 * 2.0 * 5.0));

  WBound unit{1.0, 0.0, 1.0};
  const ErrorBound e1 = error_bound(0.0, unit, vec({0, 0}), barrier, spec);
  CHECK(e1.dynamics_term == doctest::Approx(2 * 2.0 * std::sqrt(2.0)));
}

TEST_CASE("error_bound is nondecreasing in w") {
  const auto spec = motor_spec();
  const auto barrier = make_quadratic_bound_barrier(0, 1.0, kMotorBox, 10.0);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    const Vector xdot = oracle::uniform_in(vec({-50, -50}), vec({50, 50}), rng);
    double prev = -1.0;
    for (int i = 0; i <= 200; ++i) {
      const double w = 0.5 * i;
      const double e = error_bound(0.01, WBound{w, 0.0, w}, xdot, barrier, spec).total;
      REQUIRE(e >= prev);
      prev = e;
    }
  }
}

TEST_CASE("gronwall_term forms") {
  const auto barrier = make_quadratic_bound_barrier(0, 1.0, kMotorBox, 100.0);
  const auto unscaled = motor_spec(GronwallForm::kUnscaledAlpha);
  const auto scaled = motor_spec(GronwallForm::kReachScaled);
  const double th = unscaled.theta_max();
  const double f = std::expm1(th * 0.01) / th;
  CHECK(gronwall_term(0.01, barrier, unscaled) ==
        doctest::Approx((2.0 * th * 268.3 + 200.0) * f).epsilon(1e-13));
  CHECK(gronwall_term(0.01, barrier, scaled) ==
        doctest::Approx((2.0 * th + 200.0) * 268.3 * f).epsilon(1e-13));
  CHECK(gronwall_term(0.0, barrier, unscaled) == 0.0);
}

TEST_CASE("derivative_deviation_bound dominates the true deviation") {
  const auto spec = motor_spec();
  CHECK(derivative_deviation_bound(vec({0.2, 0.3}), vec({0.2, 0.3}), vec({2}), spec) == 0.0);
  const auto unit = make_lipschitz_spec(vec({1}), Matrix::Zero(1, 1), 1, 0,
                                        Box(vec({-1}), vec({1})));
  CHECK(derivative_deviation_bound(vec({0}), vec({2}), vec({0.5}), unit) == doctest::Approx(2.0));

  std::mt19937_64 rng(17);
  for (int i = 0; i < 10000; ++i) {
    const Vector x = oracle::uniform_in(kMotorBox.lo, kMotorBox.hi, rng);
    const Vector xp = oracle::uniform_in(kMotorBox.lo, kMotorBox.hi, rng);
    const double u = std::uniform_real_distribution<double>(-4, 4)(rng);
    const double dev = (oracle::motor_rate(x, u) - oracle::motor_rate(xp, u)).norm();
    REQUIRE(dev <= derivative_deviation_bound(x, xp, vec({u}), spec) * (1 + 1e-12));
  }
}

TEST_CASE("shifted_norm_max") {
  CHECK(shifted_norm_max(vec({1, 2}), 0.0) == doctest::Approx(std::sqrt(5.0)));
  CHECK(shifted_norm_max(vec({1, 2}), 1.0) == doctest::Approx(std::sqrt(13.0)));
  CHECK(shifted_norm_max(vec({1, 2}), -1.0) == doctest::Approx(std::sqrt(13.0)));
}
