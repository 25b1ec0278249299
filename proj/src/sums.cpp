#include "lfold/sums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lfold/errors.hpp"
#include "lfold/ntkernel.hpp"
#include "lfold/numerics.hpp"

namespace lfold::sums {

namespace {

void check_ell(unsigned ell) {
  if (ell % 2 == 0) throw DomainError("ell must be odd: even ell brings zeta and L(s, chi_D) factors");
}

void check_range(const mf::Eigenform& f, std::uint64_t X) {
  if (X > f.x_max()) {
    throw RangeError("X = " + std::to_string(X) + " exceeds the coefficient table (x_max = " +
                     std::to_string(f.x_max()) + "); build a larger table or ingest a file");
  }
}

// Weighted sum of lambda_f(n)^ell over the mask, emitting the running total at each grid point.
template <typename Weight>
std::vector<double> weighted_lambda_sums(const mf::Eigenform& f, unsigned ell, const std::vector<std::uint64_t>& grid,
                                         const Weight& weight) {
  const std::uint64_t X = grid.empty() ? 0 : grid.back();
  const auto mask = squarefree_coprime_mask(f.level(), X);
  std::vector<double> out;
  out.reserve(grid.size());
  CompensatedSum sum;
  std::size_t g = 0;
  while (g < grid.size() && grid[g] == 0) {
    out.push_back(0.0);
    ++g;
  }
  for (std::uint64_t n = 1; n <= X; ++n) {
    if (mask[n]) {
      const auto w = weight(n);
      if (w != 0) {
        sum.add(mf::normalized_coefficient(f.a(n), n, 1, f.weight(), ell) * static_cast<double>(w));
      }
    }
    while (g < grid.size() && grid[g] == n) {
      out.push_back(sum.value());
      ++g;
    }
  }
  return out;
}

void check_grid(const std::vector<std::uint64_t>& grid) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) throw InputError("X grid must be strictly increasing");
  }
}

}  // namespace

std::string to_string(ExponentVariant v) {
  return v == ExponentVariant::Statement ? "statement (1 - 1/B)" : "proof (1 - 2/B)";
}

std::vector<std::uint8_t> squarefree_coprime_mask(std::uint64_t N, std::uint64_t X) {
  if (N == 0) throw DomainError("level must be positive");
  auto mask = nt::squarefree_sieve(X);
  for (const auto& [p, e] : nt::factorize(N).factors) {
    for (std::uint64_t m = p; m <= X; m += p) mask[m] = 0;
  }
  return mask;
}

std::vector<double> summatory_SQ_grid(const mf::Eigenform& f, const qf::QuadraticForm& Q, unsigned ell,
                                      const std::vector<std::uint64_t>& grid, unsigned threads) {
  check_ell(ell);
  check_grid(grid);
  if (grid.empty()) return {};
  check_range(f, grid.back());
  const auto counts = qf::representation_counts(Q, grid.back(), threads);
  return weighted_lambda_sums(f, ell, grid, [&](std::uint64_t n) { return counts[n]; });
}

double summatory_SQ(const mf::Eigenform& f, const qf::QuadraticForm& Q, unsigned ell, std::uint64_t X,
                    unsigned threads) {
  return summatory_SQ_grid(f, Q, ell, {X}, threads).front();
}

double summatory_SD(const mf::Eigenform& f, std::int64_t D, unsigned ell, std::uint64_t X, unsigned threads) {
  check_ell(ell);
  check_range(f, X);
  const qf::ClassSet cls = qf::class_set(D);
  std::vector<std::uint64_t> total(X + 1, 0);
  for (const auto& Q : cls.forms) {
    const auto counts = qf::representation_counts(Q, X, threads);
    for (std::uint64_t n = 0; n <= X; ++n) total[n] += counts[n];
  }
  return weighted_lambda_sums(f, ell, {X}, [&](std::uint64_t n) { return total[n]; }).front();
}

double summatory_rstar(const mf::Eigenform& f, std::int64_t D, unsigned ell, std::uint64_t X) {
  check_ell(ell);
  check_range(f, X);
  const auto rstar = qf::r_star_table(D, X);
  return weighted_lambda_sums(f, ell, {X}, [&](std::uint64_t n) { return rstar[n]; }).front();
}

EetaResult E_eta(std::int64_t D, std::uint64_t N, double eta, std::uint64_t X) {
  if (X == 0) throw DomainError("E_eta: X must be at least 1");
  const auto mask = squarefree_coprime_mask(N, X);
  const auto rstar = qf::r_star_table(D, X);
  std::vector<std::uint8_t> omega(X + 1, 0);
  for (const std::uint64_t p : nt::sieve_primes(X)) {
    for (std::uint64_t m = p; m <= X; m += p) ++omega[m];
  }
  std::vector<double> eta_pow(16, 1.0);
  for (std::size_t i = 1; i < eta_pow.size(); ++i) eta_pow[i] = eta_pow[i - 1] * eta;
  CompensatedSum sum;
  for (std::uint64_t n = 1; n <= X; ++n) {
    if (mask[n] && rstar[n] != 0) sum.add(eta_pow[omega[n]] * rstar[n]);
  }
  EetaResult out;
  out.primitive = sum.value();
  out.w = qf::unit_count(D);
  out.lattice = out.w * out.primitive;
  return out;
}

EulerP1 euler_P1(std::int64_t D, std::uint64_t N, double eta, std::uint64_t prime_cutoff) {
  if (prime_cutoff < 2) throw DomainError("euler_P1: prime_cutoff must be at least 2");
  if (N == 0) throw DomainError("euler_P1: level must be positive");
  CompensatedSum log_sum;
  for (const std::uint64_t p : nt::sieve_primes(prime_cutoff)) {
    const double inv = 1.0 / static_cast<double>(p);
    const int chi = nt::kronecker(D, p);
    double term = eta * std::log1p(-inv) + eta * std::log1p(-chi * inv);
    if (N % p != 0) term += std::log1p(eta * (1 + chi) * inv);
    log_sum.add(term);
  }
  EulerP1 out;
  out.cutoff = prime_cutoff;
  out.truncated = std::exp(log_sum.value());
  const double c = static_cast<double>(prime_cutoff);
  out.tail_bound = (eta + eta * eta) / (c * std::log(c));
  out.value = out.truncated * std::exp(-out.tail_bound);
  return out;
}

L1Result L1_chi(std::int64_t D, std::uint64_t partial_terms) {
  const qf::ClassSet cls = qf::class_set(D);
  L1Result out;
  out.h = cls.h;
  out.w = cls.w;
  out.fundamental = nt::is_fundamental_discriminant(D);
  out.value = 2 * std::numbers::pi * static_cast<double>(cls.h) /
              (static_cast<double>(cls.w) * std::sqrt(static_cast<double>(-D)));
  CompensatedSum sum;
  for (std::uint64_t n = 1; n <= partial_terms; ++n) {
    const int chi = nt::kronecker(D, n);
    if (chi != 0) sum.add(chi / static_cast<double>(n));
  }
  out.partial_terms = partial_terms;
  out.partial_sum = sum.value();
  out.cross_check = std::fabs(out.value - out.partial_sum) <= 1e-3;
  if (!out.fundamental) {
    out.status = "warning: D is not fundamental; class number formula evaluated with the computed h";
  } else {
    out.status = out.cross_check ? "ok" : "warning: partial character sum disagrees by more than 1e-3";
  }
  return out;
}

MainTermE main_term_E(std::int64_t D, std::uint64_t N, double eta, double X, std::uint64_t prime_cutoff) {
  if (X < 3) throw DomainError("main_term_E: X must be at least 3");
  MainTermE out;
  out.P1 = euler_P1(D, N, eta, prime_cutoff).value;
  out.L1 = L1_chi(D).value;
  out.gamma_eta = gamma_function(eta);
  const double logX = std::log(X);
  out.main = out.P1 * std::pow(out.L1, eta) / out.gamma_eta * X * std::pow(logX, eta - 1);
  const double LN = std::log(static_cast<double>(nt::omega(N)) + 3);
  out.error_envelope =
      std::fabs(out.main) * std::pow(LN, 2 * std::numbers::e * eta + 2) * std::sqrt(static_cast<double>(N)) / logX;
  return out;
}

}  // namespace lfold::sums
