#include "lfold/series.hpp"

#include <algorithm>
#include <cstdint>

#include "lfold/errors.hpp"

static_assert(GMP_NAIL_BITS == 0, "limb packing assumes no nail bits");

namespace lfold::series {

namespace {

constexpr std::size_t kLimbBits = GMP_NUMB_BITS;
constexpr std::size_t kSchoolbookCutoff = 64;

std::size_t max_bits(const IntegerSeries& s, std::size_t length) {
  std::size_t bits = 0;
  const std::size_t n = std::min(length, s.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(s[i]) != 0) bits = std::max(bits, mpz_sizeinbase(s[i].get_mpz_t(), 2));
  }
  return bits;
}

std::size_t bit_length(std::size_t v) {
  std::size_t bits = 0;
  while (v != 0) {
    ++bits;
    v >>= 1;
  }
  return bits;
}

// OR the magnitude of `value` into `limbs` starting at bit `offset`.
void deposit(std::vector<mp_limb_t>& limbs, std::size_t offset, const Integer& value) {
  const std::size_t count = mpz_size(value.get_mpz_t());
  const mp_limb_t* src = mpz_limbs_read(value.get_mpz_t());
  const std::size_t word = offset / kLimbBits;
  const unsigned shift = offset % kLimbBits;
  for (std::size_t i = 0; i < count; ++i) {
    limbs[word + i] |= src[i] << shift;
    if (shift != 0) limbs[word + i + 1] |= src[i] >> (kLimbBits - shift);
  }
}

// sign(s) * sum |s_i| 2^(slot*i) split by sign into two nonnegative integers.
void pack(const IntegerSeries& s, std::size_t length, std::size_t slot, Integer& positive, Integer& negative) {
  const std::size_t n = std::min(length, s.size());
  const std::size_t total_limbs = (n * slot) / kLimbBits + 3;
  std::vector<mp_limb_t> pos(total_limbs, 0), neg(total_limbs, 0);
  bool any_neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    const int sign = sgn(s[i]);
    if (sign > 0) {
      deposit(pos, i * slot, s[i]);
    } else if (sign < 0) {
      any_neg = true;
      deposit(neg, i * slot, Integer(-s[i]));
    }
  }
  auto to_mpz = [](const std::vector<mp_limb_t>& limbs, Integer& out) {
    std::size_t used = limbs.size();
    while (used > 0 && limbs[used - 1] == 0) --used;
    mp_limb_t* dst = mpz_limbs_write(out.get_mpz_t(), std::max<std::size_t>(used, 1));
    std::copy(limbs.begin(), limbs.begin() + static_cast<std::ptrdiff_t>(used), dst);
    mpz_limbs_finish(out.get_mpz_t(), static_cast<mp_size_t>(used));
  };
  to_mpz(pos, positive);
  if (any_neg) {
    to_mpz(neg, negative);
  } else {
    negative = 0;
  }
}

// Bits [offset, offset + width) of a limb array, as a nonnegative integer.
void extract(const mp_limb_t* limbs, std::size_t limb_count, std::size_t offset, std::size_t width,
             std::vector<mp_limb_t>& scratch, Integer& out) {
  const std::size_t out_limbs = (width + kLimbBits - 1) / kLimbBits;
  scratch.assign(out_limbs, 0);
  const std::size_t word = offset / kLimbBits;
  const unsigned shift = offset % kLimbBits;
  for (std::size_t i = 0; i < out_limbs; ++i) {
    const std::size_t lo = word + i;
    mp_limb_t v = lo < limb_count ? limbs[lo] >> shift : 0;
    if (shift != 0 && lo + 1 < limb_count) v |= limbs[lo + 1] << (kLimbBits - shift);
    scratch[i] = v;
  }
  const std::size_t top_bits = width % kLimbBits;
  if (top_bits != 0) scratch[out_limbs - 1] &= (mp_limb_t{1} << top_bits) - 1;
  std::size_t used = out_limbs;
  while (used > 0 && scratch[used - 1] == 0) --used;
  mp_limb_t* dst = mpz_limbs_write(out.get_mpz_t(), std::max<std::size_t>(used, 1));
  std::copy(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(used), dst);
  mpz_limbs_finish(out.get_mpz_t(), static_cast<mp_size_t>(used));
}

}  // namespace

IntegerSeries multiply_schoolbook(const IntegerSeries& a, const IntegerSeries& b, std::size_t length) {
  IntegerSeries out(length);
  const std::size_t na = std::min(a.size(), length);
  for (std::size_t i = 0; i < na; ++i) {
    if (sgn(a[i]) == 0) continue;
    const std::size_t nb = std::min(b.size(), length - i);
    for (std::size_t j = 0; j < nb; ++j) {
      mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  return out;
}

IntegerSeries multiply_kronecker(const IntegerSeries& a, const IntegerSeries& b, std::size_t length) {
  IntegerSeries out(length);
  const std::size_t na = std::min(a.size(), length);
  const std::size_t nb = std::min(b.size(), length);
  if (na == 0 || nb == 0) return out;
  const std::size_t bits_a = max_bits(a, na);
  const std::size_t bits_b = max_bits(b, nb);
  if (bits_a == 0 || bits_b == 0) return out;

  // |c_n| <= min(na, nb) * 2^(bits_a + bits_b); one more bit for the sign of
  // the balanced digit.
  const std::size_t slot = bits_a + bits_b + bit_length(std::min(na, nb)) + 1;

  Integer pa, ma, pb, mb;
  pack(a, na, slot, pa, ma);
  pack(b, nb, slot, pb, mb);
  const Integer packed_a = pa - ma;
  const Integer packed_b = pb - mb;
  Integer product = packed_a * packed_b;

  const int sign = sgn(product);
  if (sign == 0) return out;
  if (sign < 0) product = -product;

  const std::size_t limb_count = mpz_size(product.get_mpz_t());
  const mp_limb_t* limbs = mpz_limbs_read(product.get_mpz_t());
  std::vector<mp_limb_t> scratch;
  Integer digit;
  Integer carry = 0;
  Integer half;
  mpz_setbit(half.get_mpz_t(), slot - 1);
  Integer full;
  mpz_setbit(full.get_mpz_t(), slot);

  for (std::size_t i = 0; i < length; ++i) {
    extract(limbs, limb_count, i * slot, slot, scratch, digit);
    digit += carry;
    if (digit >= half) {
      digit -= full;
      carry = 1;
    } else {
      carry = 0;
    }
    out[i] = sign < 0 ? Integer(-digit) : digit;
  }
  return out;
}

IntegerSeries multiply(const IntegerSeries& a, const IntegerSeries& b, std::size_t length) {
  if (std::min({a.size(), b.size(), length}) <= kSchoolbookCutoff) return multiply_schoolbook(a, b, length);
  return multiply_kronecker(a, b, length);
}

std::vector<Integer> divisor_power_sums(unsigned power, std::size_t length) {
  if (power > 5) throw InputError("divisor_power_sums: power > 5 unsupported");
  using u128 = unsigned __int128;
  std::vector<u128> acc(length, 0);
  for (std::size_t d = 1; d < length; ++d) {
    u128 dp = 1;
    for (unsigned e = 0; e < power; ++e) dp *= d;
    for (std::size_t m = d; m < length; m += d) acc[m] += dp;
  }
  std::vector<Integer> out(length);
  for (std::size_t i = 0; i < length; ++i) {
    const auto hi = static_cast<std::uint64_t>(acc[i] >> 64);
    const auto lo = static_cast<std::uint64_t>(acc[i]);
    Integer v = static_cast<unsigned long>(hi);
    v <<= 64;
    v += static_cast<unsigned long>(lo);
    out[i] = v;
  }
  return out;
}

IntegerSeries eisenstein_like(long constant, long scale, unsigned power, std::size_t length) {
  IntegerSeries out = divisor_power_sums(power, length);
  for (std::size_t i = 1; i < length; ++i) out[i] *= scale;
  if (length > 0) out[0] = constant;
  return out;
}

}  // namespace lfold::series
