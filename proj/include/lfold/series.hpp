#pragma once

// Truncated power series with arbitrary-precision integer coefficients.

#include <gmpxx.h>

#include <cstddef>
#include <vector>

namespace lfold::series {

using Integer = mpz_class;

/// Coefficients c[0], c[1], ... of sum c[i] q^i, truncated to a fixed length.
using IntegerSeries = std::vector<Integer>;

// O(n^2) reference product; the result has `length` coefficients.
IntegerSeries multiply_schoolbook(const IntegerSeries& a, const IntegerSeries& b, std::size_t length);

/// Kronecker substitution: pack both series into one big integer each with a
/// slot width wide enough for any signed product coefficient, multiply once
/// with GMP, unpack with balanced digits. Exact for any signs.
IntegerSeries multiply_kronecker(const IntegerSeries& a, const IntegerSeries& b, std::size_t length);

// Picks schoolbook for short inputs and Kronecker substitution otherwise.
IntegerSeries multiply(const IntegerSeries& a, const IntegerSeries& b, std::size_t length);

// c0 + scale * sum_{n>=1} sigma_power(n) q^n, length coefficients.
IntegerSeries eisenstein_like(long constant, long scale, unsigned power, std::size_t length);

// sigma_power(n) for 0 <= n < length (entry 0 is 0).
std::vector<Integer> divisor_power_sums(unsigned power, std::size_t length);

}  // namespace lfold::series
