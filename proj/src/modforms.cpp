#include "lfold/modforms.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "lfold/errors.hpp"
#include "lfold/ntkernel.hpp"
#include "lfold/series.hpp"

namespace lfold::mf {

namespace {

constexpr mpfr_prec_t kPrecision = 128;

// Scratch MPFR registers, one set per thread.
struct MpfrScratch {
  mpfr_t x, d;
  MpfrScratch() {
    mpfr_init2(x, kPrecision);
    mpfr_init2(d, kPrecision);
  }
  ~MpfrScratch() {
    mpfr_clear(x);
    mpfr_clear(d);
  }
  MpfrScratch(const MpfrScratch&) = delete;
  MpfrScratch& operator=(const MpfrScratch&) = delete;
};

MpfrScratch& scratch() {
  thread_local MpfrScratch s;
  return s;
}

Integer pow_ui(std::uint64_t base, unsigned long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), e);
  return r;
}

}  // namespace

double normalized_coefficient(const Integer& a, std::uint64_t base, unsigned exponent, int weight, unsigned ell) {
  auto& s = scratch();
  mpfr_set_z(s.x, a.get_mpz_t(), MPFR_RNDN);
  mpfr_set_ui(s.d, static_cast<unsigned long>(base), MPFR_RNDN);
  mpfr_sqrt(s.d, s.d, MPFR_RNDN);
  mpfr_pow_ui(s.d, s.d, static_cast<unsigned long>(exponent) * static_cast<unsigned long>(weight - 1), MPFR_RNDN);
  mpfr_div(s.x, s.x, s.d, MPFR_RNDN);
  if (ell != 1) mpfr_pow_ui(s.x, s.x, ell, MPFR_RNDN);
  return mpfr_get_d(s.x, MPFR_RNDN);
}

Eigenform::Eigenform(int weight, std::uint64_t level, std::string label, std::vector<Integer> coeffs)
    : weight_(weight), level_(level), label_(std::move(label)), coeffs_(std::move(coeffs)) {
  if (weight_ < 2 || weight_ % 2 != 0) throw InputError("Eigenform: weight must be even and >= 2");
  if (level_ == 0) throw InputError("Eigenform: level must be positive");
  if (coeffs_.size() < 2) throw InputError("Eigenform: coefficient table is empty");
  coeffs_[0] = 0;
}

const Integer& Eigenform::a(std::uint64_t n) const {
  if (n == 0 || n > x_max()) {
    throw RangeError("a(" + std::to_string(n) + ") outside stored range 1.." + std::to_string(x_max()));
  }
  return coeffs_[n];
}

const std::vector<int>& supported_level_one_weights() {
  static const std::vector<int> weights{12, 16, 18, 20, 22, 26};
  return weights;
}

Eigenform build_level_one_eigenform(int weight, std::uint64_t upto) {
  using series::IntegerSeries;
  int e4_power = 0;
  int e6_power = 0;
  switch (weight) {
    case 12: break;
    case 16: e4_power = 1; break;
    case 18: e6_power = 1; break;
    case 20: e4_power = 2; break;
    case 22: e4_power = 1; e6_power = 1; break;
    case 26: e4_power = 2; e6_power = 1; break;
    default:
      throw InputError("unsupported weight " + std::to_string(weight) +
                       " (level-1 cusp space must be one-dimensional: 12, 16, 18, 20, 22, 26)");
  }
  if (upto == 0) throw InputError("build_level_one_eigenform: upto must be positive");

  const std::size_t len = static_cast<std::size_t>(upto) + 1;
  const IntegerSeries e4 = series::eisenstein_like(1, 240, 3, len);
  const IntegerSeries e6 = series::eisenstein_like(1, -504, 5, len);

  const IntegerSeries e4_sq = series::multiply(e4, e4, len);
  const IntegerSeries e4_cube = series::multiply(e4_sq, e4, len);
  const IntegerSeries e6_sq = series::multiply(e6, e6, len);

  IntegerSeries delta(len);
  for (std::size_t i = 0; i < len; ++i) {
    Integer diff = e4_cube[i] - e6_sq[i];
    if (!mpz_divisible_ui_p(diff.get_mpz_t(), 1728)) {
      throw InternalError("E4^3 - E6^2 not divisible by 1728 at q^" + std::to_string(i));
    }
    mpz_divexact_ui(delta[i].get_mpz_t(), diff.get_mpz_t(), 1728);
  }

  IntegerSeries form = delta;
  if (e4_power == 1) form = series::multiply(form, e4, len);
  if (e4_power == 2) form = series::multiply(form, e4_sq, len);
  if (e6_power == 1) form = series::multiply(form, e6, len);

  if (sgn(form[0]) != 0 || (len > 1 && form[1] != 1)) {
    throw InternalError("built form is not a normalized cusp form");
  }
  std::string label = "Delta";
  if (e4_power > 0) label += e4_power == 1 ? "*E4" : "*E4^2";
  if (e6_power > 0) label += "*E6";
  return Eigenform(weight, 1, label + " (level 1, weight " + std::to_string(weight) + ")", std::move(form));
}

NormalizedEigenvalue normalized_lambda(const Eigenform& f, std::uint64_t n) {
  const Integer& a = f.a(n);
  return {n, normalized_coefficient(a, n, 1, f.weight()), sgn(a)};
}

std::vector<double> normalized_lambda_table(const Eigenform& f, std::uint64_t upto) {
  return lambda_power_table(f, 1, upto);
}

std::vector<double> lambda_power_table(const Eigenform& f, unsigned ell, std::uint64_t upto) {
  if (upto > f.x_max()) {
    throw RangeError("lambda table to " + std::to_string(upto) + " exceeds stored range " +
                     std::to_string(f.x_max()));
  }
  std::vector<double> out(upto + 1, 0.0);
  for (std::uint64_t n = 1; n <= upto; ++n) out[n] = normalized_coefficient(f.a(n), n, 1, f.weight(), ell);
  return out;
}

Integer coefficient_prime_power(const Eigenform& f, std::uint64_t p, unsigned m) {
  if (f.level() % p == 0) {
    throw DomainError("coefficient_prime_power: p = " + std::to_string(p) + " divides the level");
  }
  if (m == 0) return 1;
  // Lookup while p^m stays inside the table.
  std::uint64_t pm = 1;
  bool in_range = true;
  for (unsigned i = 0; i < m; ++i) {
    if (pm > f.x_max() / p) {
      in_range = false;
      break;
    }
    pm *= p;
  }
  if (in_range) return f.a(pm);

  const Integer& ap = f.a(p);
  const Integer pk1 = pow_ui(p, static_cast<unsigned long>(f.weight() - 1));
  Integer prev = 1;
  Integer cur = ap;
  for (unsigned r = 1; r < m; ++r) {
    Integer next = ap * cur - pk1 * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

Integer coefficient_multiplicative(const Eigenform& f, std::uint64_t n) {
  if (n <= f.x_max()) return f.a(n);
  Integer out = 1;
  for (const auto& [p, e] : nt::factorize(n).factors) out *= coefficient_prime_power(f, p, e);
  return out;
}

SatakeAngle satake_angle(const Eigenform& f, std::uint64_t p) {
  if (f.level() % p == 0) throw DomainError("satake_angle: p divides the level");
  const double lambda = normalized_lambda(f, p).value;
  if (std::fabs(lambda) > 2.0 + 1e-9) {
    throw InvariantViolation("|lambda_f(" + std::to_string(p) + ")| = " + std::to_string(std::fabs(lambda)) +
                             " exceeds 2: coefficients are corrupt");
  }
  const double c = std::clamp(lambda / 2.0, -1.0, 1.0);
  return {p, std::acos(c)};
}

DeligneReport verify_deligne(const Eigenform& f, std::uint64_t upto) {
  if (upto > f.x_max()) throw RangeError("verify_deligne: upto exceeds stored range");
  DeligneReport report;
  report.upto = upto;
  if (upto == 0) return report;
  const nt::FactorTable table(std::max<std::uint64_t>(upto, 2));
  Integer lhs, rhs;
  for (std::uint64_t n = 1; n <= upto; ++n) {
    const std::uint64_t d = n == 1 ? 1 : table.factorize(n).divisor_count();
    lhs = f.a(n) * f.a(n);
    mpz_ui_pow_ui(rhs.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(f.weight() - 1));
    rhs *= static_cast<unsigned long>(d * d);
    if (lhs > rhs) report.violations.push_back(n);
  }
  report.pass = report.violations.empty();
  return report;
}

IntegrityReport verify_integrity(const Eigenform& f, std::uint64_t upto) {
  if (upto > f.x_max()) throw RangeError("verify_integrity: upto exceeds stored range");
  IntegrityReport report;
  report.checked_upto = upto;
  auto fail = [&report](std::string what, std::optional<std::pair<std::uint64_t, std::uint64_t>> pair) {
    report.pass = false;
    report.failure = std::move(what);
    report.pair = pair;
    return report;
  };
  if (upto == 0) return report;
  if (f.a(1) != 1) return fail("normalization: a(1) = " + f.a(1).get_str() + ", expected 1", std::nullopt);

  const nt::FactorTable table(std::max<std::uint64_t>(upto, 2));
  Integer expected, bound;
  for (std::uint64_t n = 2; n <= upto; ++n) {
    const nt::FactoredInteger fac = table.factorize(n);
    const auto& [p, e] = fac.factors.front();
    if (fac.factors.size() >= 2) {
      std::uint64_t m = 1;
      for (unsigned i = 0; i < e; ++i) m *= p;
      const std::uint64_t rest = n / m;
      expected = f.a(m) * f.a(rest);
      if (f.a(n) != expected) {
        return fail("multiplicativity: a(" + std::to_string(n) + ") != a(" + std::to_string(m) + ") * a(" +
                        std::to_string(rest) + ")",
                    std::make_pair(m, rest));
      }
    } else if (e >= 2 && f.level() % p != 0) {
      const std::uint64_t pr = n / p;  // p^(e-1)
      const std::uint64_t pr1 = pr / p;
      expected = f.a(p) * f.a(pr) - pow_ui(p, static_cast<unsigned long>(f.weight() - 1)) * f.a(pr1);
      if (f.a(n) != expected) {
        return fail("Hecke recursion: a(" + std::to_string(n) + ") != a(" + std::to_string(p) + ") a(" +
                        std::to_string(pr) + ") - " + std::to_string(p) + "^" + std::to_string(f.weight() - 1) +
                        " a(" + std::to_string(pr1) + ")",
                    std::make_pair(p, pr));
      }
    }
    const std::uint64_t d = fac.divisor_count();
    mpz_ui_pow_ui(bound.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(f.weight() - 1));
    bound *= static_cast<unsigned long>(d * d);
    expected = f.a(n) * f.a(n);
    if (expected > bound) {
      return fail("Deligne bound: a(" + std::to_string(n) + ")^2 > d(n)^2 n^(k-1)", std::make_pair(n, n));
    }
  }
  return report;
}

}  // namespace lfold::mf
