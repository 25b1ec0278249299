#pragma once

// Positive definite binary quadratic forms a x^2 + b xy + c y^2.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lfold::qf {

/// A primitive positive definite integral binary quadratic form.
/// Construction throws DomainError unless a > 0, b^2 - 4ac < 0 and
/// gcd(a, b, c) = 1.
class QuadraticForm {
 public:
  QuadraticForm(std::int64_t a, std::int64_t b, std::int64_t c);

  std::int64_t a() const noexcept { return a_; }
  std::int64_t b() const noexcept { return b_; }
  std::int64_t c() const noexcept { return c_; }
  std::int64_t discriminant() const noexcept { return b_ * b_ - 4 * a_ * c_; }

  bool is_reduced() const noexcept;

  // Q(x, y), exact.
  __int128 operator()(std::int64_t x, std::int64_t y) const noexcept {
    return static_cast<__int128>(a_) * x * x + static_cast<__int128>(b_) * x * y + static_cast<__int128>(c_) * y * y;
  }

  std::string to_string() const;

  friend bool operator==(const QuadraticForm&, const QuadraticForm&) = default;

 private:
  std::int64_t a_, b_, c_;
};

/// The h(D) reduced primitive forms of discriminant D, and the unit count w_D.
struct ClassSet {
  std::int64_t D = 0;
  std::vector<QuadraticForm> forms;
  std::uint64_t h = 0;
  unsigned w = 0;
};

/// Gauss reduction to the unique reduced representative
/// (|b| <= a <= c, and b >= 0 when |b| = a or a = c).
QuadraticForm reduce(const QuadraticForm& q);

// Throws DomainError unless D < 0 and D = 0, 1 mod 4.
ClassSet class_set(std::int64_t D);

// 6 for D = -3, 4 for D = -4, 2 otherwise.
unsigned unit_count(std::int64_t D);

/// r_Q(n) = #{(x, y) in Z^2 : Q(x, y) = n} for 0 <= n <= X, by enumerating
/// the lattice points of the ellipse Q <= X. Entry 0 is 1 (the origin).
/// With threads > 1 the y-range is split into contiguous blocks; counts are
/// integers, so the result does not depend on the thread count.
std::vector<std::uint32_t> representation_counts(const QuadraticForm& q, std::uint64_t X, unsigned threads = 1);

// One (x, y) with Q(x, y) = n, if any.
std::optional<std::pair<std::int64_t, std::int64_t>> find_representation(const QuadraticForm& q, std::uint64_t n);

// r*(n) = sum_{d | n} chi_D(d).
std::int64_t r_star(std::int64_t D, std::uint64_t n);

/// r*(n) for 0 <= n <= X via a multiplicative sieve (entry 0 is 0).
std::vector<std::int32_t> r_star_table(std::int64_t D, std::uint64_t X);

enum class FormulaStatus { Pass, Fail, NotApplicable };

std::string to_string(FormulaStatus s);

struct RepFormulaReport {
  FormulaStatus status = FormulaStatus::Pass;
  std::uint64_t checked_upto = 0;
  std::uint64_t h = 0;
  unsigned w = 0;
  std::uint64_t first_failure = 0;  // 0 unless status == Fail
  std::int64_t lattice_count = 0;   // r_Q(first_failure)
  std::int64_t formula_value = 0;   // w_D r*(first_failure)
};

/// Checks r_Q(n) = w_D r*(n) for 1 <= n <= X when h(D) = 1; reports
/// NotApplicable for class number > 1.
RepFormulaReport verify_rep_formula(const QuadraticForm& q, std::uint64_t X);

}  // namespace lfold::qf
