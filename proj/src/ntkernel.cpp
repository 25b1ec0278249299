#include "lfold/ntkernel.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>

#include "lfold/errors.hpp"

namespace lfold::nt {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Primes used by trial division; grown on demand, never shrunk.
std::shared_ptr<const std::vector<std::uint64_t>> trial_primes(std::uint64_t upto) {
  static std::mutex mu;
  static std::shared_ptr<const std::vector<std::uint64_t>> primes;
  static std::uint64_t covered = 0;
  std::lock_guard<std::mutex> lock(mu);
  if (!primes || upto > covered) {
    covered = std::max<std::uint64_t>({upto, 2 * covered, 1u << 16});
    primes = std::make_shared<const std::vector<std::uint64_t>>(sieve_primes(covered));
  }
  return primes;
}

}  // namespace

bool FactoredInteger::squarefree() const noexcept {
  return std::all_of(factors.begin(), factors.end(), [](const PrimePower& pp) { return pp.exponent == 1; });
}

std::uint64_t FactoredInteger::divisor_count() const noexcept {
  std::uint64_t d = 1;
  for (const auto& pp : factors) d *= pp.exponent + 1;
  return d;
}

std::vector<std::uint64_t> sieve_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    if (i <= limit / i) {
      for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
  }
  return primes;
}

FactoredInteger factorize(std::uint64_t n) {
  if (n == 0) throw DomainError("factorize: n must be positive");
  FactoredInteger out;
  out.n = n;
  std::uint64_t rest = n;
  const auto primes = trial_primes(std::max<std::uint64_t>(isqrt(n), 2));
  for (std::uint64_t p : *primes) {
    if (p * p > rest) break;
    if (rest % p != 0) continue;
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    out.factors.push_back({p, e});
  }
  if (rest > 1) out.factors.push_back({rest, 1});
  return out;
}

unsigned omega(std::uint64_t n) { return static_cast<unsigned>(factorize(n).factors.size()); }

std::vector<std::uint8_t> squarefree_sieve(std::uint64_t limit) {
  std::vector<std::uint8_t> table(limit + 1, 1);
  table[0] = 0;
  for (std::uint64_t p = 2; p <= limit / p; ++p) {
    const std::uint64_t sq = p * p;
    for (std::uint64_t m = sq; m <= limit; m += sq) table[m] = 0;
  }
  return table;
}

std::vector<std::uint64_t> divisors(const FactoredInteger& f) {
  std::vector<std::uint64_t> out{1};
  out.reserve(f.divisor_count());
  for (const auto& [p, e] : f.factors) {
    const std::size_t base = out.size();
    std::uint64_t pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) { return divisors(factorize(n)); }

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) noexcept {
  while (b != 0) {
    const std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

int kronecker(std::int64_t D, std::uint64_t n) {
  if (n == 0) throw DomainError("kronecker: n must be positive");
  int result = 1;
  while (n % 2 == 0) {
    n /= 2;
    if (D % 2 == 0) return 0;
    const std::int64_t r = ((D % 8) + 8) % 8;
    if (r == 3 || r == 5) result = -result;
  }
  if (n == 1) return result;
  // Jacobi symbol (D mod n | n) for odd n.
  std::uint64_t a = static_cast<std::uint64_t>(((D % static_cast<std::int64_t>(n)) + static_cast<std::int64_t>(n)) %
                                               static_cast<std::int64_t>(n));
  std::uint64_t m = n;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const std::uint64_t r = m % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, m);
    if (a % 4 == 3 && m % 4 == 3) result = -result;
    a %= m;
  }
  return m == 1 ? result : 0;
}

bool is_discriminant(std::int64_t D) noexcept {
  const std::int64_t r = ((D % 4) + 4) % 4;
  return r == 0 || r == 1;
}

bool is_fundamental_discriminant(std::int64_t D) {
  if (D == 0 || D == 1 || !is_discriminant(D)) return false;
  const auto abs_d = static_cast<std::uint64_t>(D < 0 ? -D : D);
  const std::int64_t r4 = ((D % 4) + 4) % 4;
  if (r4 == 1) return factorize(abs_d).squarefree();
  const std::int64_t m = D / 4;
  const std::int64_t m4 = ((m % 4) + 4) % 4;
  if (m4 != 2 && m4 != 3) return false;
  return factorize(abs_d / 4).squarefree();
}

KroneckerCharacter::KroneckerCharacter(std::int64_t D) : D_(D) {
  if (D >= 0 || !is_discriminant(D)) {
    throw DomainError("KroneckerCharacter: D = " + std::to_string(D) + " is not a negative discriminant");
  }
}

FactorTable::FactorTable(std::uint64_t limit) : limit_(limit), spf_(limit + 1, 0) {
  if (limit > 0xFFFFFFFFull) throw InputError("FactorTable: limit too large");
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] != 0) continue;
    spf_[i] = static_cast<std::uint32_t>(i);
    if (i > limit / i) continue;
    for (std::uint64_t j = i * i; j <= limit; j += i) {
      if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }
  }
}

std::uint32_t FactorTable::smallest_prime_factor(std::uint64_t n) const {
  if (n < 2 || n > limit_) throw RangeError("FactorTable: n outside 2.." + std::to_string(limit_));
  return spf_[n];
}

FactoredInteger FactorTable::factorize(std::uint64_t n) const {
  if (n == 0) throw DomainError("factorize: n must be positive");
  if (n > limit_) throw RangeError("FactorTable: n beyond table");
  FactoredInteger out;
  out.n = n;
  while (n > 1) {
    const std::uint32_t p = spf_[n];
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.factors.push_back({p, e});
  }
  return out;
}

}  // namespace lfold::nt
