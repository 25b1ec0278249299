#include "lfold/fold.hpp"

#include <cmath>
#include <sstream>

#include "lfold/errors.hpp"
#include "lfold/ntkernel.hpp"

namespace lfold::fold {

namespace {

Integer binomial(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

Integer pow_ui(std::uint64_t base, unsigned long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), e);
  return r;
}

void trim(Polynomial& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

void add_scaled(Polynomial& acc, const Polynomial& p, const Integer& scale) {
  if (acc.size() < p.size()) acc.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) acc[i] += scale * p[i];
}

void require_prime_coprime(const mf::Eigenform& f, std::uint64_t p, const char* where) {
  if (p < 2 || nt::factorize(p).factors.size() != 1 || nt::factorize(p).factors.front().exponent != 1) {
    throw DomainError(std::string(where) + ": " + std::to_string(p) + " is not prime");
  }
  if (f.level() % p == 0) throw DomainError(std::string(where) + ": p = " + std::to_string(p) + " divides the level");
}

}  // namespace

Polynomial chebyshev_T(unsigned m) {
  // U_0 = 1, U_1 = 2x, U_{r+1} = 2x U_r - U_{r-1}.
  Polynomial prev{1};
  Polynomial cur{0, 2};
  if (m == 0) return prev;
  for (unsigned r = 1; r < m; ++r) {
    Polynomial next(cur.size() + 1);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] = 2 * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  // x = y / 2: the y^i coefficient is u_i / 2^i.
  for (std::size_t i = 0; i < cur.size(); ++i) {
    if (!mpz_divisible_2exp_p(cur[i].get_mpz_t(), i)) {
      throw InternalError("U_" + std::to_string(m) + "(y/2) has a non-integral coefficient");
    }
    mpz_tdiv_q_2exp(cur[i].get_mpz_t(), cur[i].get_mpz_t(), i);
  }
  trim(cur);
  return cur;
}

Integer binomial_difference(unsigned ell, unsigned n) {
  if (n == 0) return 1;
  return binomial(ell, n) - binomial(ell, n - 1);
}

Polynomial cheb_identity_residual(const ChebyshevDecomposition& dec) {
  Polynomial acc(dec.ell + 1);
  for (unsigned j = 0; j <= dec.ell; ++j) {
    if (sgn(dec.coeffs[j]) != 0) add_scaled(acc, chebyshev_T(j), dec.coeffs[j]);
  }
  acc[dec.ell] -= 1;
  trim(acc);
  return acc;
}

ChebyshevDecomposition cheb_decomposition(unsigned ell) {
  if (ell == 0) throw DomainError("cheb_decomposition: ell must be positive");
  ChebyshevDecomposition dec;
  dec.ell = ell;
  dec.coeffs.assign(ell + 1, Integer(0));
  for (unsigned n = 0; 2 * n <= ell; ++n) dec.coeffs[ell - 2 * n] = binomial_difference(ell, n);
  if (!cheb_identity_residual(dec).empty()) {
    throw InternalError("Chebyshev identity fails for ell = " + std::to_string(ell));
  }
  return dec;
}

FoldConstants fold_constants(unsigned ell) {
  if (ell == 0) throw DomainError("fold_constants: ell must be positive");
  mpq_class A = 0;
  mpq_class B = 0;
  for (unsigned n = 0; 2 * n <= ell; ++n) {
    const mpz_class lead = static_cast<long>(ell) - 2 * static_cast<long>(n) + 1;
    const mpq_class weight = mpq_class(lead * binomial(ell, n), static_cast<unsigned long>(ell - n + 1));
    A += weight * (lead - 1);
    B += weight * lead;
  }
  A.canonicalize();
  B.canonicalize();
  if (A.get_den() != 1 || B.get_den() != 1) {
    throw InternalError("fold constants are not integral for ell = " + std::to_string(ell));
  }
  return {ell, A.get_num(), B.get_num()};
}

bool binomial_identity_check(unsigned ell) {
  for (unsigned n = 0; 2 * n <= ell; ++n) {
    mpq_class rhs(mpz_class(static_cast<long>(ell) - 2 * static_cast<long>(n) + 1) * binomial(ell, n),
                  static_cast<unsigned long>(ell - n + 1));
    rhs.canonicalize();
    const mpq_class lhs = n == 0 ? mpq_class(1) : mpq_class(binomial(ell, n) - binomial(ell, n - 1));
    if (lhs != rhs) return false;
  }
  return true;
}

LfoldCoefficient lfold_coefficient(const mf::Eigenform& f, unsigned ell, std::uint64_t n) {
  if (n == 0) throw DomainError("lfold_coefficient: n must be positive");
  if (nt::gcd(n, f.level()) != 1) throw DomainError("lfold_coefficient: gcd(n, N) > 1");
  if (!nt::factorize(n).squarefree()) throw DomainError("lfold_coefficient: n is not squarefree");
  const Integer& a = f.a(n);
  LfoldCoefficient out;
  out.n = n;
  out.value = mf::normalized_coefficient(a, n, 1, f.weight(), ell);
  const int s = sgn(a);
  out.sign = (ell % 2 == 1 || s == 0) ? s : 1;
  return out;
}

double sym_coefficient(const mf::Eigenform& f, unsigned m, std::uint64_t n) {
  if (m == 0 || n == 0) throw DomainError("sym_coefficient: m and n must be positive");
  if (nt::gcd(n, f.level()) != 1) throw DomainError("sym_coefficient: gcd(n, N) > 1");
  double out = 1.0;
  for (const auto& [p, e] : nt::factorize(n).factors) {
    // Local factor sum_{i <= e/m} lambda_f(p^{m(e - m i)}) for m >= 2; sym^1 f = f.
    double local = 0.0;
    if (m == 1) local = mf::normalized_coefficient(mf::coefficient_prime_power(f, p, e), p, e, f.weight());
    for (unsigned i = 0; m >= 2 && m * i <= e; ++i) {
      const unsigned r = m * (e - m * i);
      local += mf::normalized_coefficient(mf::coefficient_prime_power(f, p, r), p, r, f.weight());
    }
    out *= local;
  }
  return out;
}

FcrelReport verify_fcrel(const mf::Eigenform& f, unsigned ell, std::uint64_t p) {
  require_prime_coprime(f, p, "verify_fcrel");
  if (ell == 0) throw DomainError("verify_fcrel: ell must be positive");
  FcrelReport report;
  mpz_pow_ui(report.lhs.get_mpz_t(), f.a(p).get_mpz_t(), ell);
  report.rhs = 0;
  for (unsigned n = 0; 2 * n <= ell; ++n) {
    report.rhs += binomial_difference(ell, n) * mf::coefficient_prime_power(f, p, ell - 2 * n) *
                  pow_ui(p, static_cast<unsigned long>(n) * static_cast<unsigned long>(f.weight() - 1));
  }
  report.pass = report.lhs == report.rhs;
  return report;
}

DecompositionReport verify_decomposition_prime(const mf::Eigenform& f, std::int64_t D, unsigned ell,
                                               std::uint64_t p) {
  require_prime_coprime(f, p, "verify_decomposition_prime");
  const int one_plus_chi = 1 + nt::kronecker(D, p);
  DecompositionReport report;
  report.lhs = mf::normalized_coefficient(f.a(p), p, 1, f.weight(), ell) * one_plus_chi;
  double bracket = 0.0;
  for (unsigned n = 0; 2 * n <= ell; ++n) {
    // sym^0 f has lambda(p) = 1.
    const double sym = ell == 2 * n ? 1.0 : sym_coefficient(f, ell - 2 * n, p);
    bracket += binomial_difference(ell, n).get_d() * sym;
  }
  report.rhs = bracket * one_plus_chi;
  const FcrelReport exact = verify_fcrel(f, ell, p);
  report.exact_pass = exact.lhs * one_plus_chi == exact.rhs * one_plus_chi;
  report.pass = report.exact_pass && std::abs(report.lhs - report.rhs) <= 1e-9;
  return report;
}

std::string to_string(const Polynomial& poly) {
  if (poly.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = poly.size(); i-- > 0;) {
    const Integer& c = poly[i];
    if (sgn(c) == 0) continue;
    Integer mag = abs(c);
    if (first) {
      if (sgn(c) < 0) out << "-";
    } else {
      out << (sgn(c) < 0 ? " - " : " + ");
    }
    if (mag != 1 || i == 0) out << mag.get_str();
    if (i >= 1) out << "y";
    if (i >= 2) out << "^" << i;
    first = false;
  }
  return out.str();
}

}  // namespace lfold::fold
