#pragma once

// The step kernel alpha, the sieve weight h_Y, and the delay equation for sigma(u).

#include <cstdint>
#include <string>
#include <vector>

namespace lfold::sigma {

/// Piecewise constant function on (0, inf). With breakpoints x_1 < ... < x_M
/// the value is values[0] on (0, x_1], values[j] on (x_j, x_{j+1}] and
/// `tail` on (x_M, inf). At t <= 0 it takes values[0].
class StepFunction {
 public:
  StepFunction(std::vector<double> breakpoints, std::vector<double> values, double tail);

  double operator()(double t) const noexcept;

  double initial_value() const noexcept { return values_.front(); }
  double tail() const noexcept { return tail_; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<double>& values() const noexcept { return values_; }

  // Left value minus right value at breakpoint j (0-based).
  double jump(std::size_t j) const noexcept;

  // Smallest distance between consecutive breakpoints, and from 0 to x_1.
  double min_gap() const noexcept;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  double tail_;
};

/// alpha truncated at order K: 2 on (0, 1/(K+1)], 2 cos(pi/(m+1)) on
/// (1/(m+1), 1/m] for 1 <= m <= K, and -2 on (1, inf).
StepFunction alpha_step(unsigned K);

// Pointwise ell-th power.
StepFunction pow_step(const StepFunction& alpha, unsigned ell);

/// 0 if p | N, -2 if p > Y, alpha(log p / log Y) otherwise.
double h_Y_value(std::uint64_t p, double Y, std::uint64_t N, const StepFunction& alpha);

/// sigma on the uniform grid u_i = i h, 0 <= i <= n.
struct SigmaSolution {
  double beta0 = 0.0;
  double x1 = 0.0;  // first breakpoint; sigma = u^{beta0 - 1} on (0, x1]
  double h = 0.0;
  double U = 0.0;
  unsigned ell = 0;
  unsigned K = 0;
  std::vector<double> sigma;

  double u(std::size_t i) const noexcept { return static_cast<double>(i) * h; }

  // Linear interpolation between grid nodes; 0 for u <= 0. Throws RangeError beyond U.
  double at(double u) const;
};

/// Integrates (u^{1 - beta0} sigma)' = -u^{-beta0} sum_k c_k sigma(u - x_k),
/// with c_k the jump of beta at x_k, by the trapezoidal rule on
/// g = u^{1 - beta0} sigma. The initial region is seeded analytically.
/// Throws InputError when h exceeds 1e-3, x_1 or half the smallest
/// breakpoint gap, or when U is outside (0, 10].
SigmaSolution solve_sigma(const StepFunction& beta, double U, double h);

// solve_sigma for beta = alpha_step(K)^ell, recording ell and K.
SigmaSolution solve_sigma_for(unsigned ell, unsigned K, double U, double h);

/// |u sigma(u) - int_0^u sigma(t) beta(u - t) dt|, with the integral split at
/// the jumps of beta(u - t) and each piece integrated by the trapezoidal rule
/// on the grid.
double residual_integral_eq(const SigmaSolution& sol, const StepFunction& beta, double u);

struct U0Result {
  bool crossing = false;  // false: sigma > 0 on all of [x1, U]
  double u0 = 0.0;        // first zero of the grid interpolant, or U
  std::string status;
};

U0Result find_u0(const SigmaSolution& sol);

struct MonteCarloResult {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Monte-Carlo estimate of
///   I_j(u) = int_{t_i >= 0, sum t_i <= u} (u - sum t_i)^{beta0 - 1} prod (beta0 - beta(t_i)) dt_i / t_i
/// for j in {1, 2}, sampling each t_i with density proportional to 1/t on
/// [x_1, u]. Samples are drawn in fixed blocks, block b from its own
/// generator seeded by (seed, b), so the result depends only on the seed and
/// sample count.
MonteCarloResult I_j_montecarlo(const StepFunction& beta, double u, unsigned j, std::uint64_t samples,
                                std::uint64_t seed = 1, unsigned threads = 1);

}  // namespace lfold::sigma
