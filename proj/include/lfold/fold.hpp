#pragma once

// Chebyshev decomposition of x^ell, the constants A and B, and l-fold /
// symmetric-power coefficients with exact prime-level identity checks.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "lfold/modforms.hpp"

namespace lfold::fold {

using Integer = mpz_class;

// Coefficients c[i] of y^i.
using Polynomial = std::vector<Integer>;

/// T_m(y) = U_m(y / 2), with U the Chebyshev polynomial of the second kind.
Polynomial chebyshev_T(unsigned m);

struct ChebyshevDecomposition {
  unsigned ell = 0;
  // coeffs[j] = A_{ell,j} for 0 <= j <= ell; zero unless j = ell mod 2.
  std::vector<Integer> coeffs;
};

/// A_{ell,j} = C(ell, (ell-j)/2) - C(ell, (ell-j)/2 - 1) for j = ell mod 2.
/// These pair with T_j: x^ell = sum_j A_{ell,j} T_j(x), e.g. x^3 = T_3 + 2 T_1.
/// The identity is checked exactly before returning; a mismatch throws
/// InternalError.
ChebyshevDecomposition cheb_decomposition(unsigned ell);

// sum_j A_{ell,j} T_j - x^ell; the zero polynomial (empty) when the identity holds.
Polynomial cheb_identity_residual(const ChebyshevDecomposition& dec);

struct FoldConstants {
  unsigned ell = 0;
  Integer A;
  Integer B;
};

/// A = sum_{n <= ell/2} (ell-2n+1)(ell-2n)/(ell-n+1) C(ell,n),
/// B = sum_{n <= ell/2} (ell-2n+1)^2/(ell-n+1) C(ell,n), summed in exact
/// rationals. Both are integers for every ell >= 1.
FoldConstants fold_constants(unsigned ell);

// C(ell, n) - C(ell, n - 1), with C(ell, -1) = 0.
Integer binomial_difference(unsigned ell, unsigned n);

struct LfoldCoefficient {
  std::uint64_t n = 0;
  double value = 0.0;  // lambda_f(n)^ell
  int sign = 0;        // exact sign of a_f(n)^ell
};

/// lambda_f(n)^ell for squarefree n coprime to the level. Throws DomainError
/// otherwise, RangeError when n > x_max.
LfoldCoefficient lfold_coefficient(const mf::Eigenform& f, unsigned ell, std::uint64_t n);

/// lambda_{sym^m f}(n) = sum_{d^m | n} lambda_f((n/d^m)^m) for m >= 2, and
/// lambda_f(n) for m = 1, evaluated prime by prime. Throws DomainError when
/// gcd(n, N) > 1.
double sym_coefficient(const mf::Eigenform& f, unsigned m, std::uint64_t n);

struct FcrelReport {
  bool pass = false;
  Integer lhs;  // a(p)^ell
  Integer rhs;  // sum_n (C(ell,n) - C(ell,n-1)) a(p^{ell-2n}) p^{n(k-1)}
};

/// Exact check of the binomial-difference expansion of a(p)^ell.
/// Throws DomainError when p is not prime or divides the level.
FcrelReport verify_fcrel(const mf::Eigenform& f, unsigned ell, std::uint64_t p);

struct DecompositionReport {
  bool pass = false;
  bool exact_pass = false;
  double lhs = 0.0;  // lambda_f(p)^ell r*(p)
  double rhs = 0.0;  // [sum_n (C(ell,n) - C(ell,n-1)) lambda_{sym^{ell-2n} f}(p)] (1 + chi_D(p))
};

/// Prime-level decomposition identity: binary64 agreement within 1e-9 and the
/// integer-lifted identity exactly.
DecompositionReport verify_decomposition_prime(const mf::Eigenform& f, std::int64_t D, unsigned ell,
                                               std::uint64_t p);

/// C(ell,n) - C(ell,n-1) = (ell-2n+1)/(ell-n+1) C(ell,n) for 0 <= n <= ell/2, in exact rationals.
bool binomial_identity_check(unsigned ell);

std::string to_string(const Polynomial& poly);

}  // namespace lfold::fold
