#pragma once

// Exact Fourier coefficients of normalized Hecke eigenforms.

#include <gmpxx.h>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lfold::mf {

using Integer = mpz_class;

/// A normalized Hecke eigenform f = sum a(n) q^n with its coefficient table
/// a(1..x_max). Immutable once constructed.
class Eigenform {
 public:
  // coeffs[0] is ignored; coeffs[n] = a(n) for 1 <= n < coeffs.size().
  Eigenform(int weight, std::uint64_t level, std::string label, std::vector<Integer> coeffs);

  int weight() const noexcept { return weight_; }
  std::uint64_t level() const noexcept { return level_; }
  const std::string& label() const noexcept { return label_; }
  std::uint64_t x_max() const noexcept { return coeffs_.size() - 1; }

  // Throws RangeError for n == 0 or n > x_max().
  const Integer& a(std::uint64_t n) const;

  // a(0..x_max) with a(0) = 0.
  std::span<const Integer> coefficients() const noexcept { return coeffs_; }

 private:
  int weight_;
  std::uint64_t level_;
  std::string label_;
  std::vector<Integer> coeffs_;
};

struct NormalizedEigenvalue {
  std::uint64_t n;
  double value;    // a(n) / n^((k-1)/2), correctly rounded from a 128-bit evaluation
  int exact_sign;  // sign of the exact integer a(n)
};

struct SatakeAngle {
  std::uint64_t p;
  double theta;  // in [0, pi], 2 cos(theta) = lambda_f(p)
};

/// Result of an invariant sweep. `pass` is false at the first failure, whose
/// kind and offending (m, n) pair are recorded.
struct IntegrityReport {
  bool pass = true;
  std::uint64_t checked_upto = 0;
  std::string failure;                                         // empty on pass
  std::optional<std::pair<std::uint64_t, std::uint64_t>> pair;  // failing (m, n)
};

struct DeligneReport {
  bool pass = true;
  std::uint64_t upto = 0;
  std::vector<std::uint64_t> violations;
};

// Weights whose level-1 cusp space is one-dimensional.
const std::vector<int>& supported_level_one_weights();

/// Unique normalized level-1 cusp eigenform of the given weight, coefficients
/// a(1..upto), from Delta = (E4^3 - E6^2)/1728 times E4^i E6^j.
/// Throws InputError for an unsupported weight, InternalError if 1728 does
/// not divide E4^3 - E6^2 exactly.
Eigenform build_level_one_eigenform(int weight, std::uint64_t upto);

/// (a / (base^exponent)^((k-1)/2))^ell, evaluated in 128-bit MPFR and rounded
/// once to binary64. Handles prime powers beyond the 64-bit range.
double normalized_coefficient(const Integer& a, std::uint64_t base, unsigned exponent, int weight, unsigned ell = 1);

NormalizedEigenvalue normalized_lambda(const Eigenform& f, std::uint64_t n);

// lambda_f(n) for every 1 <= n <= upto (entry 0 is 0).
std::vector<double> normalized_lambda_table(const Eigenform& f, std::uint64_t upto);

/// lambda_f(n)^ell, each computed in 128-bit arithmetic before rounding.
std::vector<double> lambda_power_table(const Eigenform& f, unsigned ell, std::uint64_t upto);

/// a(p^m): table lookup while p^m <= x_max, otherwise the Hecke recursion
/// a(p^{r+1}) = a(p) a(p^r) - p^{k-1} a(p^{r-1}). Throws DomainError if p | N.
Integer coefficient_prime_power(const Eigenform& f, std::uint64_t p, unsigned m);

// a(n) for any n coprime to N whose prime factors are within the table.
Integer coefficient_multiplicative(const Eigenform& f, std::uint64_t n);

/// Throws InvariantViolation when |lambda_f(p)| > 2 + 1e-9.
SatakeAngle satake_angle(const Eigenform& f, std::uint64_t p);

// Exact check a(n)^2 <= d(n)^2 n^{k-1} for n <= upto.
DeligneReport verify_deligne(const Eigenform& f, std::uint64_t upto);

/// Normalization, multiplicativity on coprime splits, Hecke recursion on
/// prime powers (p not dividing N) and the Deligne bound, scanned in
/// ascending n.
IntegrityReport verify_integrity(const Eigenform& f, std::uint64_t upto);

// --- Coefficient files -----------------------------------------------------

// Sidecar metadata path for a coefficient table: "<path>.meta.json".
std::filesystem::path metadata_path(const std::filesystem::path& table);

/// Writes the `n,a` table and its metadata sidecar.
void save_eigenform(const Eigenform& f, const std::filesystem::path& path);

/// Parses a coefficient file and re-verifies every invariant. Throws
/// ParseError for malformed input and InvariantViolation (carrying the first
/// failing pair) for data that is not a normalized eigenform.
Eigenform load_eigenform(const std::filesystem::path& path);

// Version of the series engine; part of every cache key.
inline constexpr int kEngineVersion = 1;

/// Builds a level-1 eigenform, reading from and writing to the cache
/// directory when one is configured (argument, else LFOLD_CACHE_DIR).
Eigenform cached_level_one_eigenform(int weight, std::uint64_t upto,
                                     const std::optional<std::filesystem::path>& cache_dir = std::nullopt);

}  // namespace lfold::mf
