#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lfold/errors.hpp"
#include "lfold/sigma.hpp"
#include "oracles.hpp"

using namespace lfold;

namespace {

// beta = alpha^ell straight from the definition of alpha, K = 20.
double beta_oracle(double t, unsigned ell) {
  if (t > 1) return -std::pow(2.0, ell);
  const auto m = static_cast<unsigned>(std::floor(1.0 / t));
  const double a = m > 20 ? 2.0 : 2.0 * std::cos(std::numbers::pi / (m + 1));
  return std::pow(a, ell);
}

// I_1(u) = int_0^u (u - t)^{beta0 - 1} (beta0 - beta(t)) dt / t, split at breakpoints.
double I1_quadrature(const sigma::StepFunction& beta, double u) {
  const double b0 = beta.initial_value();
  std::vector<double> cuts;
  for (const double x : beta.breakpoints()) {
    if (x < u) cuts.push_back(x);
  }
  cuts.push_back(u);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    const double weight = b0 - beta(0.5 * (lo + hi));
    total += weight * oracle::adaptive_simpson([&](double t) { return std::pow(u - t, b0 - 1) / t; }, lo, hi, 1e-13);
  }
  return total;
}

}  // namespace

TEST_CASE("alpha_step") {
  const auto a = sigma::alpha_step(20);
  CHECK(a(0.75) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(a(0.75) == 0.0);
  CHECK(a(0.4) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a(1.5) == -2.0);
  CHECK(a(0.01) == 2.0);
  CHECK(a(1.0) == 0.0);
  CHECK(a(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a.breakpoints().front() == doctest::Approx(1.0 / 21));
  CHECK(a.breakpoints().back() == 1.0);
  for (double t = 0.001; t < 1.5; t += 0.00713) {
    REQUIRE(std::pow(a(t), 3) == doctest::Approx(beta_oracle(t, 3)).epsilon(1e-12).scale(1));
  }
}

TEST_CASE("pow_step") {
  const auto b = sigma::pow_step(sigma::alpha_step(20), 3);
  CHECK(b(0.4) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(b.initial_value() == 8.0);
  CHECK(b(1.5) == -8.0);
  CHECK(b.tail() == -8.0);
}

TEST_CASE("h_Y_value") {
  const auto a = sigma::alpha_step(20);
  CHECK(sigma::h_Y_value(101, 100, 1, a) == -2.0);
  CHECK(sigma::h_Y_value(7, 100, 1, a) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sigma::h_Y_value(3, 100, 6, a) == 0.0);
}

TEST_CASE("initial region is exact") {
  const sigma::StepFunction beta({0.2, 1.0}, {8.0, 1.0}, -8.0);
  const auto sol = sigma::solve_sigma(beta, 1.0, 1e-3);
  CHECK(sol.at(0.1) == doctest::Approx(1e-7).epsilon(1e-12));
  CHECK(sol.sigma[100] == std::pow(sol.u(100), 7.0));

  const auto s3 = sigma::solve_sigma_for(3, 20, 3.0, 1e-4);
  for (std::size_t i = 0; i < s3.sigma.size() && s3.u(i) <= s3.x1; ++i) {
    REQUIRE(s3.sigma[i] == (i == 0 ? 0.0 : std::pow(s3.u(i), 7.0)));
  }
}

TEST_CASE("sigma continuous across x1 and positive at 2") {
  const auto s = sigma::solve_sigma_for(3, 20, 3.0, 1e-4);
  const auto i1 = static_cast<std::size_t>(s.x1 / s.h);
  for (std::size_t i = i1 - 5; i < i1 + 5; ++i) {
    REQUIRE(std::fabs(s.sigma[i + 1] - s.sigma[i]) < 10 * s.h * 7 * std::pow(s.u(i + 1), 6));
  }
  CHECK(s.at(2.0) > 0);
}

TEST_CASE("input validation") {
  const auto b = sigma::pow_step(sigma::alpha_step(20), 3);
  CHECK_THROWS_AS(sigma::solve_sigma(b, 3.0, 0.5), InputError);
  CHECK_THROWS_AS(sigma::solve_sigma(b, 3.0, 2e-3), InputError);
  CHECK_THROWS_AS(sigma::solve_sigma(b, 11.0, 1e-4), InputError);
  CHECK_THROWS_AS(sigma::solve_sigma(b, 0.0, 1e-4), InputError);
  // Smallest gap of alpha_step(20) is 1/20 - 1/21 ~ 2.4e-3; a finer kernel rejects 1e-3.
  CHECK_THROWS_AS(sigma::solve_sigma_for(3, 40, 3.0, 1e-3), InputError);
}

TEST_CASE("integral-equation residual") {
  const auto beta = sigma::pow_step(sigma::alpha_step(20), 3);
  const auto s = sigma::solve_sigma(beta, 3.0, 1e-4);
  for (double u = s.x1; u <= 3.0; u += 0.01) {
    const double r = sigma::residual_integral_eq(s, beta, u);
    REQUIRE(r >= 0.0);
    REQUIRE(r < 1e-3 * (1 + std::pow(u, 8.0)));
  }
  // Inside the initial region both sides are closed forms.
  CHECK(sigma::residual_integral_eq(s, beta, 0.04) < 1e-9 * std::max(1.0, std::pow(0.04, 8.0)));

  const auto fine = sigma::solve_sigma(beta, 3.0, 5e-5);
  const double r1 = sigma::residual_integral_eq(s, beta, 2.0);
  const double r2 = sigma::residual_integral_eq(fine, beta, 2.0);
  CHECK(r1 / r2 > 3.0);
  CHECK(r1 / r2 < 5.0);
}

TEST_CASE("grid halving") {
  const auto coarse = sigma::solve_sigma_for(3, 20, 3.0, 1e-4);
  const auto fine = sigma::solve_sigma_for(3, 20, 3.0, 5e-5);
  double halving = 0.0;
  for (std::size_t i = 0; i < coarse.sigma.size(); ++i) {
    if (coarse.u(i) >= coarse.x1) halving = std::max(halving, std::fabs(coarse.sigma[i] - fine.sigma[2 * i]));
  }
  CHECK(halving < 1e-4);

  const auto u0c = sigma::find_u0(sigma::solve_sigma_for(3, 20, 4.0, 1e-4));
  const auto u0f = sigma::find_u0(sigma::solve_sigma_for(3, 20, 4.0, 5e-5));
  REQUIRE(u0c.crossing);
  REQUIRE(u0f.crossing);
  CHECK(std::fabs(u0c.u0 - u0f.u0) <= 2e-4);
  CHECK(u0c.u0 > 1.0);
}

TEST_CASE("truncation stability: K = 20 against K = 40") {
  const auto k20 = sigma::solve_sigma_for(3, 20, 3.0, 1e-4);
  const auto k40 = sigma::solve_sigma_for(3, 40, 3.0, 1e-4);
  const auto k80 = sigma::solve_sigma_for(3, 80, 3.0, 5e-5);
  double d20 = 0.0, d40 = 0.0;
  for (std::size_t i = 0; i < k20.sigma.size(); ++i) {
    const double u = k20.u(i);
    if (u < k20.x1) continue;
    d20 = std::max(d20, std::fabs(k20.sigma[i] - k40.sigma[i]));
    d40 = std::max(d40, std::fabs(k40.sigma[i] - k80.at(u)));
  }
  MESSAGE("max |sigma_K20 - sigma_K40| = " << d20 << ", max |sigma_K40 - sigma_K80| = " << d40);
  // The first omitted step is (2 cos(pi/22))^3 = 7.76, not close to 8, so the
  // change is O(1/K^2) with a large constant.
  CHECK(d40 < d20 / 3);
  CHECK(std::fabs(sigma::find_u0(k20).u0 - sigma::find_u0(k40).u0) < 5e-3);
  CHECK(d20 < 1e-3);
}

TEST_CASE("solver agrees with direct marching of the integral equation") {
  const auto beta = sigma::pow_step(sigma::alpha_step(20), 3);
  const auto s = sigma::solve_sigma(beta, 3.0, 1e-4);
  const auto direct = oracle::sigma_by_integral_equation([](double t) { return beta_oracle(t, 3); }, 8.0, 1.0 / 21, 3.0, 1e-3);
  double worst = 0.0;
  for (std::size_t i = 1; i < direct.size(); ++i) {
    const double u = i * 1e-3;
    worst = std::max(worst, std::fabs(s.at(u) - direct[i]) / (1 + std::pow(u, 7.0)));
  }
  MESSAGE("max scaled deviation from the direct marcher: " << worst);
  CHECK(worst < 5e-3);
}

TEST_CASE("find_u0") {
  const auto s3 = sigma::solve_sigma_for(3, 20, 4.0, 1e-4);
  const auto r = sigma::find_u0(s3);
  REQUIRE(r.crossing);
  CHECK(r.u0 > 1.0);
  CHECK(s3.at(r.u0 - 0.01) > 0);
  CHECK(s3.at(r.u0 + 0.01) < 0);

  const sigma::StepFunction constant({0.5}, {8.0}, 8.0);
  const auto sc = sigma::solve_sigma(constant, 5.0, 1e-3);
  const auto rc = sigma::find_u0(sc);
  CHECK_FALSE(rc.crossing);
  CHECK(rc.u0 == sc.U);
  CHECK(rc.status == "no crossing");
  for (std::size_t i = 1; i < sc.sigma.size(); ++i) {
    REQUIRE(sc.sigma[i] == doctest::Approx(std::pow(sc.u(i), 7.0)).epsilon(1e-12));
  }
}

TEST_CASE("Monte-Carlo I_1 and I_2") {
  const auto beta = sigma::pow_step(sigma::alpha_step(20), 3);
  CHECK(sigma::I_j_montecarlo(beta, 0.04, 1, 1000).value == 0.0);

  const auto mc = sigma::I_j_montecarlo(beta, 1.0, 1, 200000, 7, 2);
  const double quad = I1_quadrature(beta, 1.0);
  MESSAGE("I1(1): MC " << mc.value << " +- " << mc.std_error << ", quadrature " << quad);
  CHECK(std::fabs(mc.value - quad) < 3 * mc.std_error);
  CHECK(mc.samples == 200000);
  CHECK(mc.seed == 7);

  const auto t1 = sigma::I_j_montecarlo(beta, 1.0, 2, 100000, 3, 1);
  const auto t4 = sigma::I_j_montecarlo(beta, 1.0, 2, 100000, 3, 4);
  CHECK(t1.value == t4.value);
  CHECK(t1.std_error == t4.std_error);
  CHECK(sigma::I_j_montecarlo(beta, 1.0, 2, 100000, 4, 1).value != t1.value);
}

TEST_CASE("series check near the start: sigma = u^{beta0-1} - I_1 + I_2 / 2") {
  const auto beta = sigma::pow_step(sigma::alpha_step(20), 3);
  const auto s = sigma::solve_sigma(beta, 1.0, 1e-5);
  for (const double u : {0.06, 0.08, 2.0 / 21}) {
    const double series_quad = std::pow(u, 7.0) - I1_quadrature(beta, u);
    const auto i1 = sigma::I_j_montecarlo(beta, u, 1, 200000, 5);
    const auto i2 = sigma::I_j_montecarlo(beta, u, 2, 200000, 5);
    const double series_mc = std::pow(u, 7.0) - i1.value + 0.5 * i2.value;
    const double se = i1.std_error + 0.5 * i2.std_error;
    CHECK(std::fabs(s.at(u) - series_quad) < 1e-6 * std::pow(u, 7.0));
    CHECK(std::fabs(s.at(u) - series_mc) < 3 * se + 1e-6 * std::pow(u, 7.0));
  }
}
