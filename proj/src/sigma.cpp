#include "lfold/sigma.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "lfold/errors.hpp"
#include "lfold/numerics.hpp"

namespace lfold::sigma {

namespace {

constexpr std::uint64_t kBlockSize = 1 << 14;

// Integral over [a, b] of the piecewise-linear interpolant of sigma, using
// prefix sums of whole trapezoid cells.
class GridIntegrator {
 public:
  explicit GridIntegrator(const SigmaSolution& sol) : sol_(sol), prefix_(sol.sigma.size(), 0.0) {
    for (std::size_t i = 1; i < sol.sigma.size(); ++i) {
      prefix_[i] = prefix_[i - 1] + 0.5 * sol.h * (sol.sigma[i - 1] + sol.sigma[i]);
    }
  }

  double integral(double a, double b) const {
    if (b <= a) return 0.0;
    return antiderivative(b) - antiderivative(a);
  }

 private:
  double antiderivative(double u) const {
    if (u <= 0) return 0.0;
    const double pos = u / sol_.h;
    auto i = static_cast<std::size_t>(pos);
    if (i >= sol_.sigma.size() - 1) i = sol_.sigma.size() - 2;
    const double frac = u - sol_.u(i);
    const double s0 = sol_.sigma[i];
    const double s1 = sol_.sigma[i + 1];
    const double slope = (s1 - s0) / sol_.h;
    return prefix_[i] + frac * s0 + 0.5 * slope * frac * frac;
  }

  const SigmaSolution& sol_;
  std::vector<double> prefix_;
};

}  // namespace

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values, double tail)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)), tail_(tail) {
  if (values_.size() != breakpoints_.size() || values_.empty()) {
    throw InputError("StepFunction: need one value per breakpoint (at least one)");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > (i == 0 ? 0.0 : breakpoints_[i - 1]))) {
      throw InputError("StepFunction: breakpoints must be positive and strictly increasing");
    }
  }
}

double StepFunction::operator()(double t) const noexcept {
  // First breakpoint >= t gives the interval (x_{j-1}, x_j] containing t.
  const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t);
  if (it == breakpoints_.end()) return tail_;
  return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

double StepFunction::jump(std::size_t j) const noexcept {
  const double right = j + 1 < values_.size() ? values_[j + 1] : tail_;
  return values_[j] - right;
}

double StepFunction::min_gap() const noexcept {
  double gap = breakpoints_.front();
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) gap = std::min(gap, breakpoints_[i] - breakpoints_[i - 1]);
  return gap;
}

StepFunction alpha_step(unsigned K) {
  if (K == 0) throw InputError("alpha_step: K must be at least 1");
  std::vector<double> breakpoints;
  std::vector<double> values{2.0};
  for (unsigned m = K + 1; m >= 1; --m) {
    breakpoints.push_back(1.0 / m);
    // Value on (1/m, 1/(m-1)]; the last interval (1/1, inf) is the tail.
    if (m >= 2) values.push_back(2.0 * std::cos(std::numbers::pi / m));
  }
  // 2 cos(pi/2) is 0 up to rounding; keep it exact.
  values.back() = 0.0;
  return StepFunction(std::move(breakpoints), std::move(values), -2.0);
}

StepFunction pow_step(const StepFunction& alpha, unsigned ell) {
  auto p = [ell](double v) { return std::pow(v, static_cast<double>(ell)); };
  std::vector<double> values;
  for (const double v : alpha.values()) values.push_back(p(v));
  return StepFunction(alpha.breakpoints(), std::move(values), p(alpha.tail()));
}

double h_Y_value(std::uint64_t p, double Y, std::uint64_t N, const StepFunction& alpha) {
  if (N % p == 0) return 0.0;
  if (static_cast<double>(p) > Y) return -2.0;
  return alpha(std::log(static_cast<double>(p)) / std::log(Y));
}

double SigmaSolution::at(double u) const {
  if (u <= 0) return 0.0;
  const double last = this->u(sigma.size() - 1);
  if (u > last * (1 + 1e-12)) throw RangeError("sigma requested beyond U = " + std::to_string(last));
  const double pos = u / h;
  auto i = static_cast<std::size_t>(pos);
  if (i >= sigma.size() - 1) return sigma.back();
  const double frac = pos - static_cast<double>(i);
  return sigma[i] + frac * (sigma[i + 1] - sigma[i]);
}

SigmaSolution solve_sigma(const StepFunction& beta, double U, double h) {
  if (!(U > 0) || U > 10) throw InputError("solve_sigma: U must lie in (0, 10]");
  if (!(h > 0) || h > 1e-3) throw InputError("solve_sigma: step must lie in (0, 1e-3]");
  if (h > beta.breakpoints().front() || h > 0.5 * beta.min_gap()) {
    throw InputError("solve_sigma: step " + std::to_string(h) + " is coarser than half the smallest breakpoint gap (" +
                     std::to_string(beta.min_gap()) + ")");
  }
  SigmaSolution sol;
  sol.beta0 = beta.initial_value();
  sol.x1 = beta.breakpoints().front();
  sol.h = h;
  const auto n = static_cast<std::size_t>(std::ceil(U / h - 1e-9));
  sol.U = static_cast<double>(n) * h;
  sol.sigma.assign(n + 1, 0.0);

  const double b0 = sol.beta0;
  std::vector<double> shifts;
  std::vector<double> jumps;
  for (std::size_t k = 0; k < beta.breakpoints().size(); ++k) {
    if (beta.jump(k) != 0.0) {
      shifts.push_back(beta.breakpoints()[k]);
      jumps.push_back(beta.jump(k));
    }
  }
  // F(u) = -u^{-beta0} sum_k c_k sigma(u - x_k), reading delayed values from the grid.
  auto rhs = [&](std::size_t i) {
    const double u = sol.u(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < shifts.size(); ++k) {
      const double v = u - shifts[k];
      if (v > 0) acc += jumps[k] * sol.at(v);
    }
    return -std::pow(u, -b0) * acc;
  };

  std::size_t i = 1;
  for (; i <= n && sol.u(i) <= sol.x1; ++i) sol.sigma[i] = std::pow(sol.u(i), b0 - 1);
  // g = u^{1 - beta0} sigma is identically 1 in the initial region.
  // F vanishes on (0, x1] because every delayed argument is nonpositive there.
  double g = 1.0;
  double f_prev = 0.0;
  for (; i <= n; ++i) {
    // Delays are at least x1 >= h, so F(u_i) only reads nodes below i.
    const double f_cur = rhs(i);
    g += 0.5 * h * (f_prev + f_cur);
    sol.sigma[i] = std::pow(sol.u(i), b0 - 1) * g;
    f_prev = f_cur;
  }
  return sol;
}

SigmaSolution solve_sigma_for(unsigned ell, unsigned K, double U, double h) {
  SigmaSolution sol = solve_sigma(pow_step(alpha_step(K), ell), U, h);
  sol.ell = ell;
  sol.K = K;
  return sol;
}

double residual_integral_eq(const SigmaSolution& sol, const StepFunction& beta, double u) {
  if (u < 0 || u > sol.U * (1 + 1e-12)) throw RangeError("residual_integral_eq: u outside the grid");
  const GridIntegrator integ(sol);
  // beta(u - t) is constant for t between consecutive points u - x_k.
  const auto& xs = beta.breakpoints();
  CompensatedSum integral;
  double hi = u;
  for (std::size_t k = 0; k < xs.size() && hi > 0; ++k) {
    const double lo = std::max(0.0, u - xs[k]);
    integral.add(beta.values()[k] * integ.integral(lo, hi));
    hi = lo;
  }
  if (hi > 0) integral.add(beta.tail() * integ.integral(0.0, hi));
  return std::fabs(u * sol.at(u) - integral.value());
}

U0Result find_u0(const SigmaSolution& sol) {
  U0Result out;
  for (std::size_t i = 1; i < sol.sigma.size(); ++i) {
    if (sol.u(i) < sol.x1) continue;
    if (sol.sigma[i] <= 0.0) {
      const double s0 = sol.sigma[i - 1];
      const double s1 = sol.sigma[i];
      out.crossing = true;
      out.u0 = sol.u(i - 1) + sol.h * s0 / (s0 - s1);
      out.status = "crossing";
      return out;
    }
  }
  out.u0 = sol.U;
  out.status = "no crossing";
  return out;
}

MonteCarloResult I_j_montecarlo(const StepFunction& beta, double u, unsigned j, std::uint64_t samples,
                                std::uint64_t seed, unsigned threads) {
  if (j != 1 && j != 2) throw InputError("I_j_montecarlo: j must be 1 or 2");
  if (!(u > 0)) throw InputError("I_j_montecarlo: u must be positive");
  if (samples == 0) throw InputError("I_j_montecarlo: samples must be positive");
  MonteCarloResult out;
  out.samples = samples;
  out.seed = seed;
  out.threads = std::max(1u, threads);
  const double x1 = beta.breakpoints().front();
  if (u <= x1 * static_cast<double>(j)) return out;

  const double b0 = beta.initial_value();
  const double log_span = std::log(u / x1);
  const double scale = std::pow(log_span, static_cast<double>(j));
  const std::uint64_t blocks = (samples + kBlockSize - 1) / kBlockSize;
  std::vector<double> block_sum(blocks, 0.0);
  std::vector<double> block_sq(blocks, 0.0);

  auto run_block = [&](std::uint64_t b) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::uint64_t count = std::min(kBlockSize, samples - b * kBlockSize);
    CompensatedSum s, sq;
    for (std::uint64_t i = 0; i < count; ++i) {
      double total = 0.0;
      double weight = scale;
      for (unsigned r = 0; r < j; ++r) {
        const double t = x1 * std::exp(log_span * unif(rng));
        total += t;
        weight *= b0 - beta(t);
      }
      const double rest = u - total;
      const double v = rest > 0 ? weight * std::pow(rest, b0 - 1) : 0.0;
      s.add(v);
      sq.add(v * v);
    }
    block_sum[b] = s.value();
    block_sq[b] = sq.value();
  };

  if (out.threads == 1 || blocks == 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < out.threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::uint64_t b = t; b < blocks; b += out.threads) run_block(b);
      });
    }
    for (auto& th : pool) th.join();
  }

  CompensatedSum sum, sq;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    sum.add(block_sum[b]);
    sq.add(block_sq[b]);
  }
  const auto n = static_cast<double>(samples);
  out.value = sum.value() / n;
  const double var = std::max(0.0, sq.value() / n - out.value * out.value);
  out.std_error = std::sqrt(var / n);
  return out;
}

}  // namespace lfold::sigma
