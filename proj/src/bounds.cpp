#include <cmath>
#include <numbers>

#include "lfold/errors.hpp"
#include "lfold/fold.hpp"
#include "lfold/ntkernel.hpp"
#include "lfold/numerics.hpp"
#include "lfold/sigma.hpp"
#include "lfold/sums.hpp"

namespace lfold::sums {

namespace {

std::pair<double, double> constants_AB(unsigned ell) {
  const fold::FoldConstants c = fold::fold_constants(ell);
  return {c.A.get_d(), c.B.get_d()};
}

}  // namespace

void validate(const BoundInputs& in) {
  if (in.ell < 3 || in.ell % 2 == 0) throw DomainError("bounds need odd ell >= 3");
  if (!(in.epsilon > 0)) throw DomainError("epsilon must be positive");
  if (!(in.X >= 1)) throw DomainError("X must be at least 1");
  if (in.k < 2) throw DomainError("weight must be at least 2");
  if (in.N == 0) throw DomainError("level must be positive");
  if (in.D >= 0) throw DomainError("D must be negative");
}

double thm11_log_bound(const BoundInputs& in) {
  validate(in);
  const auto [A, B] = constants_AB(in.ell);
  const double x_exponent = (in.variant == ExponentVariant::Statement ? 1 - 1 / B : 1 - 2 / B) + in.epsilon;
  const double conductor = A * std::log(static_cast<double>(in.N)) +
                           B * (std::log(static_cast<double>(in.k)) + 0.5 * std::log(static_cast<double>(-in.D)));
  return x_exponent * std::log(in.X) + (1 / B + in.epsilon) * conductor;
}

double thm11_bound(const BoundInputs& in) { return std::exp(thm11_log_bound(in)); }

Thm12Bound thm12_bound(const BoundInputs& in) {
  validate(in);
  if (!(in.u0 > 1)) throw DomainError("u0 must exceed 1");
  const auto [A, B] = constants_AB(in.ell);
  const double q = std::ldexp(1.0, static_cast<int>(in.ell) - 1);  // 2^{ell-1}
  const qf::ClassSet cls = qf::class_set(in.D);
  const double w = cls.w;
  Thm12Bound out;
  out.h = cls.h;
  out.log_value = (1 / (2 * in.u0) + in.epsilon) *
                      (A * std::log(static_cast<double>(in.N)) + B * std::log(static_cast<double>(in.k))) -
                  q * B / in.u0 * std::log(2 * std::numbers::pi / w) +
                  ((1 - q) * B / (2 * in.u0) + in.epsilon) * std::log(static_cast<double>(-in.D));
  out.log_value_class_number =
      out.log_value - (q + 1) * B / (2 * in.u0) * std::log(static_cast<double>(cls.h));
  return out;
}

SumReport bound_ratio_sweep(const mf::Eigenform& f, const qf::QuadraticForm& Q, unsigned ell,
                            const std::vector<std::uint64_t>& grid, double epsilon, ExponentVariant variant,
                            unsigned threads) {
  SumReport report;
  report.grid = grid;
  report.variant = variant;
  report.S_values = summatory_SQ_grid(f, Q, ell, grid, threads);
  BoundInputs in;
  in.ell = ell;
  in.k = f.weight();
  in.N = f.level();
  in.D = Q.discriminant();
  in.epsilon = epsilon;
  in.variant = variant;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  unsigned points = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    in.X = static_cast<double>(std::max<std::uint64_t>(grid[i], 1));
    const double log_bound = thm11_log_bound(in);
    report.bound_values.push_back(log_bound);
    const double ratio = std::fabs(report.S_values[i]) / std::exp(log_bound);
    report.ratios.push_back(ratio);
    report.max_ratio = std::max(report.max_ratio, ratio);
    report.running_max.push_back(report.max_ratio);
    if (ratio > 0) {
      const double x = std::log(in.X);
      const double y = std::log(ratio);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++points;
    }
  }
  if (points >= 2) {
    const double denom = points * sxx - sx * sx;
    if (denom != 0) report.trend = (points * sxy - sx * sy) / denom;
  }
  return report;
}

LowerBoundReport lowerbound_lhs(std::int64_t D, std::uint64_t N, unsigned ell, double Y, double u,
                                const LowerBoundOptions& options) {
  if (ell % 2 == 0) throw DomainError("lowerbound needs odd ell");
  if (!(Y >= 2)) throw DomainError("Y must be at least 2");
  if (!(u >= 1)) throw DomainError("u must be at least 1");
  if (N == 0) throw DomainError("level must be positive");
  const double Yu = std::pow(Y, u);
  if (Yu > 1e8) throw RangeError("Y^u = " + std::to_string(Yu) + " exceeds the sieve range 1e8");

  LowerBoundReport out;
  out.limit = static_cast<std::uint64_t>(std::floor(Yu * (1 + 1e-12)));
  const std::uint64_t X = out.limit;
  const sigma::StepFunction alpha = sigma::alpha_step(options.K);

  // g(n) = h_Y(n)^ell on squarefree n, 0 elsewhere; h_Y(p) = 0 already for p | N.
  std::vector<double> g(X + 1, 0.0);
  if (X >= 1) g[1] = 1.0;
  if (X >= 2) {
    const nt::FactorTable table(X);
    std::vector<double> local(X + 1, 0.0);
    for (const std::uint64_t p : nt::sieve_primes(X)) {
      local[p] = std::pow(sigma::h_Y_value(p, Y, N, alpha), static_cast<double>(ell));
    }
    for (std::uint64_t n = 2; n <= X; ++n) {
      const std::uint64_t p = table.smallest_prime_factor(n);
      const std::uint64_t m = n / p;
      g[n] = m % p == 0 ? 0.0 : g[m] * local[p];
    }
  }
  const auto rstar = qf::r_star_table(D, X);
  CompensatedSum sum;
  for (std::uint64_t n = 1; n <= X; ++n) {
    if (g[n] != 0.0 && rstar[n] != 0) sum.add(g[n] * rstar[n]);
  }
  out.lhs = sum.value();

  out.beta0 = std::ldexp(1.0, static_cast<int>(ell));
  const sigma::SigmaSolution sol = sigma::solve_sigma_for(ell, options.K, std::max(u, 1.0), options.h);
  out.sigma_u = sol.at(u);
  out.P1 = euler_P1(D, N, out.beta0, options.prime_cutoff).value;
  out.L1 = L1_chi(D).value;
  const double common = out.sigma_u * out.P1 * std::pow(out.L1, out.beta0) / gamma_function(out.beta0) * Yu;
  out.main_term_log_Yu = common * std::pow(u * std::log(Y), out.beta0 - 1);
  out.main_term_log_Y = common * std::pow(std::log(Y), out.beta0 - 1);
  out.ratio_log_Yu = out.lhs / out.main_term_log_Yu;
  out.ratio_log_Y = out.lhs / out.main_term_log_Y;
  return out;
}

}  // namespace lfold::sums
