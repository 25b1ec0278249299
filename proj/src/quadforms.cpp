#include "lfold/quadforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "lfold/errors.hpp"
#include "lfold/ntkernel.hpp"

namespace lfold::qf {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::uint64_t ceil_sqrt(long double v) {
  if (v <= 0) return 0;
  auto r = static_cast<std::uint64_t>(std::ceil(std::sqrt(v)));
  return r + 1;
}

void count_rows(const QuadraticForm& q, std::uint64_t X, std::int64_t y_lo, std::int64_t y_hi,
                std::vector<std::uint32_t>& counts) {
  const long double a = static_cast<long double>(q.a());
  const long double b = static_cast<long double>(q.b());
  const long double D = static_cast<long double>(q.discriminant());
  const auto x_bound = static_cast<std::int64_t>(ceil_sqrt(4.0L * static_cast<long double>(q.c()) *
                                                           static_cast<long double>(X) / -D));
  const auto limit = static_cast<__int128>(X);
  for (std::int64_t y = y_lo; y <= y_hi; ++y) {
    // Q(x, y) <= X  <=>  x between the roots of a x^2 + b y x + c y^2 - X.
    const long double disc = 4.0L * a * static_cast<long double>(X) + D * static_cast<long double>(y) * y;
    if (disc < 0) continue;
    const long double root = std::sqrt(disc);
    const long double centre = -b * static_cast<long double>(y);
    auto x_lo = static_cast<std::int64_t>(std::floor((centre - root) / (2 * a))) - 1;
    auto x_hi = static_cast<std::int64_t>(std::ceil((centre + root) / (2 * a))) + 1;
    x_lo = std::max(x_lo, -x_bound);
    x_hi = std::min(x_hi, x_bound);
    for (std::int64_t x = x_lo; x <= x_hi; ++x) {
      const __int128 v = q(x, y);
      if (v <= limit) ++counts[static_cast<std::size_t>(v)];
    }
  }
}

}  // namespace

QuadraticForm::QuadraticForm(std::int64_t a, std::int64_t b, std::int64_t c) : a_(a), b_(b), c_(c) {
  if (a <= 0 || b * b - 4 * a * c >= 0) {
    throw DomainError("form " + to_string() + " is not positive definite");
  }
  const auto g = std::gcd(std::gcd(a, b), c);
  if (g != 1) throw DomainError("form " + to_string() + " is not primitive");
}

bool QuadraticForm::is_reduced() const noexcept {
  if (std::abs(b_) > a_ || a_ > c_) return false;
  if ((std::abs(b_) == a_ || a_ == c_) && b_ < 0) return false;
  return true;
}

std::string QuadraticForm::to_string() const {
  return "(" + std::to_string(a_) + "," + std::to_string(b_) + "," + std::to_string(c_) + ")";
}

QuadraticForm reduce(const QuadraticForm& q) {
  const std::int64_t D = q.discriminant();
  std::int64_t a = q.a(), b = q.b(), c = q.c();
  for (;;) {
    // b <- b mod 2a into (-a, a], with c following from the discriminant.
    const std::int64_t two_a = 2 * a;
    std::int64_t r = b - two_a * floor_div(b, two_a);
    if (r > a) r -= two_a;
    b = r;
    c = (b * b - D) / (4 * a);
    if (a > c) {
      std::swap(a, c);
      b = -b;
      continue;
    }
    break;
  }
  if (a == c && b < 0) b = -b;
  return QuadraticForm(a, b, c);
}

ClassSet class_set(std::int64_t D) {
  if (D >= 0 || !nt::is_discriminant(D)) {
    throw DomainError("class_set: D = " + std::to_string(D) + " is not a negative discriminant");
  }
  ClassSet out;
  out.D = D;
  out.w = unit_count(D);
  const auto a_max = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<long double>(-D) / 3.0L))) + 1;
  for (std::int64_t a = 1; a <= a_max; ++a) {
    for (std::int64_t b = -a; b <= a; ++b) {
      const std::int64_t num = b * b - D;
      if (num % (4 * a) != 0) continue;
      const std::int64_t c = num / (4 * a);
      if (c < a) continue;
      if ((std::abs(b) == a || a == c) && b < 0) continue;
      if (std::gcd(std::gcd(a, b), c) != 1) continue;
      out.forms.emplace_back(a, b, c);
    }
  }
  std::sort(out.forms.begin(), out.forms.end(), [](const QuadraticForm& x, const QuadraticForm& y) {
    if (x.a() != y.a()) return x.a() < y.a();
    if (std::abs(x.b()) != std::abs(y.b())) return std::abs(x.b()) < std::abs(y.b());
    return x.b() > y.b();
  });
  out.h = out.forms.size();
  return out;
}

unsigned unit_count(std::int64_t D) {
  if (D == -3) return 6;
  if (D == -4) return 4;
  return 2;
}

std::vector<std::uint32_t> representation_counts(const QuadraticForm& q, std::uint64_t X, unsigned threads) {
  const auto D = static_cast<long double>(q.discriminant());
  const auto y_bound = static_cast<std::int64_t>(
      ceil_sqrt(4.0L * static_cast<long double>(q.a()) * static_cast<long double>(X) / -D));
  std::vector<std::uint32_t> counts(X + 1, 0);
  threads = std::max(1u, threads);
  const std::int64_t rows = 2 * y_bound + 1;
  if (threads == 1 || rows < 64) {
    count_rows(q, X, -y_bound, y_bound, counts);
    return counts;
  }
  std::vector<std::vector<std::uint32_t>> partial(threads, std::vector<std::uint32_t>(X + 1, 0));
  std::vector<std::thread> pool;
  const std::int64_t block = (rows + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::int64_t lo = -y_bound + static_cast<std::int64_t>(t) * block;
    const std::int64_t hi = std::min(y_bound, lo + block - 1);
    if (lo > hi) break;
    pool.emplace_back([&, t, lo, hi] { count_rows(q, X, lo, hi, partial[t]); });
  }
  for (auto& th : pool) th.join();
  for (const auto& p : partial) {
    for (std::size_t n = 0; n <= X; ++n) counts[n] += p[n];
  }
  return counts;
}

std::optional<std::pair<std::int64_t, std::int64_t>> find_representation(const QuadraticForm& q, std::uint64_t n) {
  const auto D = static_cast<long double>(q.discriminant());
  const auto y_bound = static_cast<std::int64_t>(
      ceil_sqrt(4.0L * static_cast<long double>(q.a()) * static_cast<long double>(n) / -D));
  const auto x_bound = static_cast<std::int64_t>(
      ceil_sqrt(4.0L * static_cast<long double>(q.c()) * static_cast<long double>(n) / -D));
  // Smallest |y| first, then smallest |x|, preferring nonnegative coordinates.
  for (std::int64_t ay = 0; ay <= y_bound; ++ay) {
    for (std::int64_t ax = 0; ax <= x_bound; ++ax) {
      for (const std::int64_t y : {ay, -ay}) {
        for (const std::int64_t x : {ax, -ax}) {
          if (q(x, y) == static_cast<__int128>(n)) return std::make_pair(x, y);
        }
      }
    }
  }
  return std::nullopt;
}

std::int64_t r_star(std::int64_t D, std::uint64_t n) {
  std::int64_t total = 0;
  for (const std::uint64_t d : nt::divisors(n)) total += nt::kronecker(D, d);
  return total;
}

std::vector<std::int32_t> r_star_table(std::int64_t D, std::uint64_t X) {
  std::vector<std::int32_t> out(X + 1, 0);
  if (X == 0) return out;
  out[1] = 1;
  if (X == 1) return out;
  const nt::FactorTable table(X);
  for (std::uint64_t n = 2; n <= X; ++n) {
    const std::uint64_t p = table.smallest_prime_factor(n);
    std::uint64_t rest = n;
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    const int chi = nt::kronecker(D, p);
    std::int32_t local = 1;
    if (chi == 1) local = static_cast<std::int32_t>(e + 1);
    if (chi == -1) local = e % 2 == 0 ? 1 : 0;
    out[n] = out[rest] * local;
  }
  return out;
}

std::string to_string(FormulaStatus s) {
  switch (s) {
    case FormulaStatus::Pass: return "pass";
    case FormulaStatus::Fail: return "fail";
    case FormulaStatus::NotApplicable: return "formula not applicable";
  }
  return "unknown";
}

RepFormulaReport verify_rep_formula(const QuadraticForm& q, std::uint64_t X) {
  const std::int64_t D = q.discriminant();
  const ClassSet cls = class_set(D);
  RepFormulaReport report;
  report.h = cls.h;
  report.w = cls.w;
  report.checked_upto = X;
  if (cls.h != 1) {
    report.status = FormulaStatus::NotApplicable;
    return report;
  }
  const auto counts = representation_counts(q, X);
  for (std::uint64_t n = 1; n <= X; ++n) {
    const std::int64_t formula = static_cast<std::int64_t>(cls.w) * r_star(D, n);
    if (static_cast<std::int64_t>(counts[n]) != formula) {
      report.status = FormulaStatus::Fail;
      report.first_failure = n;
      report.lattice_count = counts[n];
      report.formula_value = formula;
      return report;
    }
  }
  return report;
}

}  // namespace lfold::qf
