#pragma once

// Elementary number theory shared by every other module: prime sieves,
// factorization, divisor enumeration and the Kronecker symbol.

#include <cstdint>
#include <vector>

namespace lfold::nt {

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Canonical factorization n = prod prime^exponent, primes strictly increasing.
struct FactoredInteger {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;

  bool squarefree() const noexcept;
  std::uint64_t divisor_count() const noexcept;
};

// Primes <= limit in ascending order; empty when limit < 2.
std::vector<std::uint64_t> sieve_primes(std::uint64_t limit);

// Throws DomainError for n == 0.
FactoredInteger factorize(std::uint64_t n);

unsigned omega(std::uint64_t n);

// Entry n is 1 iff n is squarefree, for 1 <= n <= limit. Entry 0 is 0.
std::vector<std::uint8_t> squarefree_sieve(std::uint64_t limit);

std::vector<std::uint64_t> divisors(std::uint64_t n);
std::vector<std::uint64_t> divisors(const FactoredInteger& f);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) noexcept;

/// Kronecker symbol (D|n) for n >= 1, with (D|2) = 0 for even D, +1 for
/// D = +-1 mod 8 and -1 for D = +-3 mod 8. Throws DomainError for n == 0.
int kronecker(std::int64_t D, std::uint64_t n);

// True for D = 0 or 1 mod 4 (the discriminant congruence).
bool is_discriminant(std::int64_t D) noexcept;

// Fundamental discriminant test for D != 0, 1.
bool is_fundamental_discriminant(std::int64_t D);

/// chi_D(n) = (D|n) for a negative discriminant D.
class KroneckerCharacter {
 public:
  explicit KroneckerCharacter(std::int64_t D);

  std::int64_t discriminant() const noexcept { return D_; }
  int operator()(std::uint64_t n) const { return kronecker(D_, n); }

 private:
  std::int64_t D_;
};

/// Smallest-prime-factor table for fast batch factorization of 1..limit.
class FactorTable {
 public:
  explicit FactorTable(std::uint64_t limit);

  std::uint64_t limit() const noexcept { return limit_; }
  std::uint32_t smallest_prime_factor(std::uint64_t n) const;
  FactoredInteger factorize(std::uint64_t n) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
};

}  // namespace lfold::nt
