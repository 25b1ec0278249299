#pragma once

// Summatory functions over squarefree integers represented by binary
// quadratic forms, their main terms, the bound evaluators and first sign
// changes.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lfold/modforms.hpp"
#include "lfold/quadforms.hpp"

namespace lfold::sums {

/// Which exponent of X thm11_bound uses: 1 - 1/B as stated, or the 1 - 2/B
/// that the u0 lower-bound argument actually produces.
enum class ExponentVariant { Statement, Proof };

std::string to_string(ExponentVariant v);

struct BoundInputs {
  unsigned ell = 3;
  int k = 12;
  std::uint64_t N = 1;
  std::int64_t D = -4;
  double X = 1.0;
  double epsilon = 0.01;
  double u0 = 2.235;
  ExponentVariant variant = ExponentVariant::Statement;
};

// Throws DomainError for even or small ell, epsilon <= 0 or X < 1.
void validate(const BoundInputs& in);

/// 1 where n is squarefree and coprime to N, for 0 <= n <= X (entry 0 is 0).
std::vector<std::uint8_t> squarefree_coprime_mask(std::uint64_t N, std::uint64_t X);

/// sum over squarefree n <= X, gcd(n, N) = 1, of lambda_f(n)^ell r_Q(n),
/// accumulated in ascending n with compensated summation. Throws RangeError
/// when X > x_max.
double summatory_SQ(const mf::Eigenform& f, const qf::QuadraticForm& Q, unsigned ell, std::uint64_t X,
                    unsigned threads = 1);

/// summatory_SQ at every point of an increasing grid, from one ascending
/// pass. Each value is bit-identical to the single-X call.
std::vector<double> summatory_SQ_grid(const mf::Eigenform& f, const qf::QuadraticForm& Q, unsigned ell,
                                      const std::vector<std::uint64_t>& grid, unsigned threads = 1);

/// Same sum with sum_{Q in class set} r_Q(n) in place of r_Q(n).
double summatory_SD(const mf::Eigenform& f, std::int64_t D, unsigned ell, std::uint64_t X, unsigned threads = 1);

/// Same sum with the divisor sum r*(n) = sum_{d | n} chi_D(d) as weight.
double summatory_rstar(const mf::Eigenform& f, std::int64_t D, unsigned ell, std::uint64_t X);

struct EetaResult {
  double primitive = 0.0;  // sum mu^2(n) eta^omega(n) r*(n)
  double lattice = 0.0;    // w_D times the above: the lattice-count convention
  unsigned w = 0;
};

/// sum over squarefree n <= X, gcd(n, N) = 1, of eta^omega(n) r*(n).
EetaResult E_eta(std::int64_t D, std::uint64_t N, double eta, std::uint64_t X);

struct EulerP1 {
  double value = 0.0;       // truncated product times the second-order tail factor
  double truncated = 0.0;   // product over p <= cutoff only
  double tail_bound = 0.0;  // relative size (eta + eta^2) / (cutoff log cutoff) of the neglected primes
  std::uint64_t cutoff = 0;
};

/// P(1) = prod_p (1 - 1/p)^eta (1 - chi_D(p)/p)^eta (1 + eta(1 + chi_D(p))/p),
/// the last factor omitted for p | N. The first-order terms cancel for
/// p > cutoff; the neglected primes contribute about
/// exp(-(eta + eta^2) sum_{p > cutoff} 1/p^2), which `value` includes.
EulerP1 euler_P1(std::int64_t D, std::uint64_t N, double eta, std::uint64_t prime_cutoff);

struct L1Result {
  double value = 0.0;  // 2 pi h / (w sqrt|D|)
  double partial_sum = 0.0;
  std::uint64_t partial_terms = 0;
  bool fundamental = true;
  bool cross_check = true;  // |value - partial_sum| <= 1e-3
  std::uint64_t h = 0;
  unsigned w = 0;
  std::string status;
};

/// L(1, chi_D) by the class number formula, cross-checked against
/// sum_{n <= terms} chi_D(n)/n. A non-fundamental D is evaluated anyway and
/// flagged in `status`.
L1Result L1_chi(std::int64_t D, std::uint64_t partial_terms = 1000000);

struct MainTermE {
  double main = 0.0;
  double error_envelope = 0.0;
  double P1 = 0.0;
  double L1 = 0.0;
  double gamma_eta = 0.0;
};

/// P(1) L(1, chi_D)^eta / Gamma(eta) X (log X)^{eta - 1}, with envelope
/// main L_N^{2 e eta + 2} sqrt(N) / log X, L_N = log(omega(N) + 3).
MainTermE main_term_E(std::int64_t D, std::uint64_t N, double eta, double X, std::uint64_t prime_cutoff);

// log of X^{1 - 1/B + eps} (N^A (k |D|^{1/2})^B)^{1/B + eps}; 1 - 2/B under the proof variant.
double thm11_log_bound(const BoundInputs& in);
double thm11_bound(const BoundInputs& in);

struct Thm12Bound {
  double log_value = 0.0;
  double log_value_class_number = 0.0;  // with the h(D) factor
  std::uint64_t h = 0;
};

/// log of (N^A k^B)^{1/(2u0) + eps} (2 pi / w_D)^{-2^{ell-1} B / u0}
/// |D|^{(1 - 2^{ell-1}) B / (2 u0) + eps}; the class-number variant also
/// carries h(D)^{-(2^{ell-1} + 1) B / (2 u0)}. Throws DomainError for u0 <= 1.
Thm12Bound thm12_bound(const BoundInputs& in);

enum class SignMode { I, Q, D };

std::string to_string(SignMode m);

struct SignChangeResult {
  SignMode mode = SignMode::I;
  bool found = false;
  std::uint64_t n_star = 0;
  mf::Integer witness_a;
  std::optional<qf::QuadraticForm> witness_form;
  std::optional<std::pair<std::int64_t, std::int64_t>> witness_point;
  std::uint64_t search_limit = 0;
};

/// Smallest squarefree n <= limit with gcd(n, N) = 1 and a_f(n) < 0, which for
/// odd ell is the first negative lambda_f(n)^ell. Mode Q also requires
/// r_Q(n) > 0 for `form`; mode D requires a representation by some reduced
/// form of discriminant D. Throws DomainError for even ell, RangeError when
/// limit > x_max.
SignChangeResult first_sign_change(const mf::Eigenform& f, unsigned ell, SignMode mode,
                                   const std::optional<qf::QuadraticForm>& form, std::int64_t D,
                                   std::uint64_t limit);

struct SumReport {
  std::vector<std::uint64_t> grid;
  std::vector<double> S_values;
  std::vector<double> bound_values;  // log of thm11_bound
  std::vector<double> ratios;        // |S| / bound
  std::vector<double> running_max;   // max ratio over grid points <= X
  double max_ratio = 0.0;
  double trend = 0.0;  // least-squares slope of log ratio against log X
  ExponentVariant variant = ExponentVariant::Statement;
};

SumReport bound_ratio_sweep(const mf::Eigenform& f, const qf::QuadraticForm& Q, unsigned ell,
                            const std::vector<std::uint64_t>& grid, double epsilon,
                            ExponentVariant variant = ExponentVariant::Statement, unsigned threads = 1);

struct LowerBoundReport {
  std::uint64_t limit = 0;  // floor(Y^u)
  double lhs = 0.0;
  double sigma_u = 0.0;
  double P1 = 0.0;
  double L1 = 0.0;
  double beta0 = 0.0;
  double main_term_log_Yu = 0.0;  // with (log Y^u)^{beta0 - 1}
  double main_term_log_Y = 0.0;   // with (log Y)^{beta0 - 1}
  double ratio_log_Yu = 0.0;
  double ratio_log_Y = 0.0;
};

struct LowerBoundOptions {
  unsigned K = 20;
  double h = 1e-4;
  std::uint64_t prime_cutoff = 1000000;
};

/// sum over squarefree n <= Y^u, gcd(n, N) = 1, of h_Y(n)^ell r*(n), beside
/// sigma(u) P(1) L(1, chi_D)^{beta0} / Gamma(beta0) (log Y^u)^{beta0 - 1} Y^u,
/// beta0 = 2^ell. Both the (log Y^u) and (log Y) forms of the main term are
/// reported.
LowerBoundReport lowerbound_lhs(std::int64_t D, std::uint64_t N, unsigned ell, double Y, double u,
                                const LowerBoundOptions& options = {});

}  // namespace lfold::sums
