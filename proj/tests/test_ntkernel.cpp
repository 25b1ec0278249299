#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lfold/errors.hpp"
#include "lfold/ntkernel.hpp"
#include "lfold/numerics.hpp"
#include "oracles.hpp"

using namespace lfold;

TEST_CASE("sieve_primes") {
  CHECK(nt::sieve_primes(10) == std::vector<std::uint64_t>{2, 3, 5, 7});
  CHECK(nt::sieve_primes(2) == std::vector<std::uint64_t>{2});
  CHECK(nt::sieve_primes(1).empty());
  CHECK(nt::sieve_primes(0).empty());
  const auto p30 = nt::sieve_primes(30);
  CHECK(p30.size() == 10);
  CHECK(p30.back() == 29);

  const auto primes = nt::sieve_primes(5000);
  std::vector<std::uint64_t> brute;
  for (std::uint64_t n = 2; n <= 5000; ++n) {
    if (oracle::is_prime(n)) brute.push_back(n);
  }
  CHECK(primes == brute);
}

TEST_CASE("factorize") {
  const auto f12 = nt::factorize(12);
  CHECK(f12.n == 12);
  CHECK(f12.factors == std::vector<nt::PrimePower>{{2, 2}, {3, 1}});
  CHECK(nt::factorize(1).factors.empty());
  CHECK(nt::factorize(9973).factors == std::vector<nt::PrimePower>{{9973, 1}});
  CHECK(oracle::is_prime(9973));
  CHECK_THROWS_AS(nt::factorize(0), DomainError);

  const std::uint64_t big = 600851475143ULL;
  const auto fb = nt::factorize(big);
  std::vector<nt::PrimePower> expect;
  for (const auto& [p, e] : oracle::factor(big)) expect.push_back({p, e});
  CHECK(fb.factors == expect);
}

TEST_CASE("factorization invariants") {
  nt::FactorTable table(20000);
  for (std::uint64_t n = 1; n <= 20000; ++n) {
    const auto f = nt::factorize(n);
    std::uint64_t prod = 1;
    std::uint64_t last = 0;
    for (const auto& [p, e] : f.factors) {
      REQUIRE(p > last);
      REQUIRE(e >= 1);
      last = p;
      for (unsigned i = 0; i < e; ++i) prod *= p;
    }
    REQUIRE(prod == n);
    REQUIRE(table.factorize(n).factors == f.factors);
  }
}

TEST_CASE("omega") {
  CHECK(nt::omega(1) == 0);
  CHECK(nt::omega(12) == 2);
  CHECK(nt::omega(30) == 3);
}

TEST_CASE("squarefree_sieve") {
  const auto sf = nt::squarefree_sieve(100000);
  CHECK(sf[0] == 0);
  CHECK(sf[1] == 1);
  CHECK(sf[12] == 0);
  CHECK(sf[30] == 1);
  for (std::uint64_t n = 1; n <= 100000; ++n) {
    REQUIRE(static_cast<bool>(sf[n]) == nt::factorize(n).squarefree());
  }
  for (std::uint64_t n = 1; n <= 2000; ++n) REQUIRE(static_cast<bool>(sf[n]) == oracle::squarefree(n));
}

TEST_CASE("divisors") {
  CHECK(nt::divisors(1) == std::vector<std::uint64_t>{1});
  CHECK(nt::divisors(10) == std::vector<std::uint64_t>{1, 2, 5, 10});
  CHECK(nt::divisors(36).size() == 9);
  for (std::uint64_t n = 1; n <= 10000; ++n) {
    const auto d = nt::divisors(n);
    REQUIRE(d.size() == nt::factorize(n).divisor_count());
    REQUIRE(std::is_sorted(d.begin(), d.end()));
    if (n <= 500) {
      std::vector<std::uint64_t> brute;
      for (std::uint64_t k = 1; k <= n; ++k) {
        if (n % k == 0) brute.push_back(k);
      }
      REQUIRE(d == brute);
    }
  }
}

TEST_CASE("kronecker examples") {
  CHECK(nt::kronecker(-4, 2) == 0);
  CHECK(nt::kronecker(-4, 3) == -1);
  CHECK(nt::kronecker(-3, 7) == 1);
  CHECK(nt::kronecker(-4, 1) == 1);
  CHECK_THROWS_AS(nt::kronecker(-4, 0), DomainError);
}

TEST_CASE("kronecker matches Euler-criterion oracle") {
  for (const std::int64_t D : {-3, -4, -7, -8, -11, -15, -19, -20, -23, -43, -67, -163, 5, 8, 12, 13}) {
    for (std::uint64_t n = 1; n <= 3000; ++n) REQUIRE(nt::kronecker(D, n) == oracle::kronecker(D, n));
  }
}

TEST_CASE("kronecker complete multiplicativity") {
  for (const std::int64_t D : {-4, -23}) {
    for (std::uint64_t m = 1; m <= 10000; m += 37) {
      for (std::uint64_t n = 1; n <= 10000; n += 41) {
        REQUIRE(nt::kronecker(D, m * n) == nt::kronecker(D, m) * nt::kronecker(D, n));
      }
    }
  }
}

TEST_CASE("kronecker periodic for fundamental discriminants") {
  for (const std::int64_t D : {-3, -4, -7, -8, -11, -19, -43, -67, -163}) {
    CHECK(nt::is_fundamental_discriminant(D));
    const auto period = static_cast<std::uint64_t>(-D);
    for (std::uint64_t n = 1; n + period <= 10 * period; ++n) {
      REQUIRE(nt::kronecker(D, n) == nt::kronecker(D, n + period));
    }
  }
}

TEST_CASE("character values and zeros") {
  for (const std::int64_t D : {-4, -23, -163}) {
    nt::KroneckerCharacter chi(D);
    for (const auto p : nt::sieve_primes(1000)) {
      const int v = chi(p);
      REQUIRE((v == -1 || v == 0 || v == 1));
      REQUIRE((v == 0) == (static_cast<std::uint64_t>(-D) % p == 0));
    }
  }
}

TEST_CASE("discriminant predicates") {
  CHECK(nt::is_discriminant(-3));
  CHECK(nt::is_discriminant(-4));
  CHECK_FALSE(nt::is_discriminant(-5));
  CHECK_FALSE(nt::is_fundamental_discriminant(-12));
  CHECK_FALSE(nt::is_fundamental_discriminant(-16));
  CHECK(nt::is_fundamental_discriminant(-23));
}

TEST_CASE("gcd") {
  CHECK(nt::gcd(12, 18) == 6);
  CHECK(nt::gcd(0, 5) == 5);
  CHECK(nt::gcd(7, 1) == 1);
}

TEST_CASE("compensated sum is order-stable and accurate") {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-6));
}

TEST_CASE("gamma") {
  CHECK(gamma_function(1) == 1.0);
  CHECK(gamma_function(3) == 2.0);
  CHECK(gamma_function(6) == 120.0);
  CHECK(gamma_function(0.5) == doctest::Approx(std::sqrt(3.14159265358979323846)).epsilon(1e-14));
}
