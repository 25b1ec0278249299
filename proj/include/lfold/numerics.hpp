#pragma once

#include <cmath>
#include <cstdint>

namespace lfold {

/// Neumaier's variant of Kahan summation. Order-dependent but deterministic:
/// feeding the same sequence yields bit-identical totals.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Gamma function: exact factorial for positive integers, std::tgamma otherwise.
inline double gamma_function(double x) {
  if (x > 0 && x == std::floor(x) && x <= 170) {
    double f = 1.0;
    for (std::int64_t i = 2; i < static_cast<std::int64_t>(x); ++i) f *= static_cast<double>(i);
    return f;
  }
  return std::tgamma(x);
}

inline double log_gamma_function(double x) {
  if (x > 0 && x == std::floor(x) && x <= 170) return std::log(gamma_function(x));
  return std::lgamma(x);
}

}  // namespace lfold
