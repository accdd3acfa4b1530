#include "iwasawa/padic.hpp"

#include "iwasawa/error.hpp"

#include <limits>

namespace iwasawa {

namespace modarith {

u64 prime_power(u32 p, int exponent) {
  if (p < 3 || p % 2 == 0) {
    throw Error(ErrorKind::MixedContext, "prime must be odd, got " + std::to_string(p));
  }
  if (exponent < 0) {
    throw Error(ErrorKind::PrecisionTooLarge, "negative precision");
  }
  constexpr u64 limit = u64{1} << 62;
  u64 q = 1;
  for (int i = 0; i < exponent; ++i) {
    if (q > limit / p) {
      throw Error(ErrorKind::PrecisionTooLarge,
                  std::to_string(p) + "^" + std::to_string(exponent) + " does not fit in 62 bits");
    }
    q *= p;
  }
  return q;
}

u64 add(u64 a, u64 b, u64 q) noexcept {
  u64 s = a + b;
  return s >= q ? s - q : s;
}

u64 sub(u64 a, u64 b, u64 q) noexcept { return a >= b ? a - b : a + (q - b); }

u64 mul(u64 a, u64 b, u64 q) noexcept { return static_cast<u64>((u128{a} * b) % q); }

u64 neg(u64 a, u64 q) noexcept { return a == 0 ? 0 : q - a; }

u64 reduce(i128 x, u64 q) noexcept {
  i128 r = x % static_cast<i128>(q);
  if (r < 0) r += q;
  return static_cast<u64>(r);
}

u64 pow(u64 base, u64 exponent, u64 q) noexcept {
  u64 result = 1 % q;
  base %= q;
  while (exponent > 0) {
    if (exponent & 1) result = mul(result, base, q);
    base = mul(base, base, q);
    exponent >>= 1;
  }
  return result;
}

std::optional<u64> inverse(u64 a, u64 q) noexcept {
  i128 old_r = static_cast<i128>(a % q), r = static_cast<i128>(q);
  i128 old_s = 1, s = 0;
  while (r != 0) {
    i128 quotient = old_r / r;
    i128 tmp = old_r - quotient * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quotient * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) {
    if (q == 1) return 0;
    return std::nullopt;
  }
  return reduce(old_s, q);
}

int valuation(u64 x, u32 p, int cap) noexcept {
  if (x == 0) return cap;
  int v = 0;
  while (x % p == 0 && v < cap) {
    x /= p;
    ++v;
  }
  return v;
}

int valuation(i128 x, u32 p) noexcept {
  if (x < 0) x = -x;
  int v = 0;
  while (x != 0 && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

i128 centered(u64 x, u64 q) noexcept {
  return x > q / 2 ? static_cast<i128>(x) - static_cast<i128>(q) : static_cast<i128>(x);
}

}  // namespace modarith

PadicScalar::PadicScalar(u32 p, int precision, u64 residue, bool exact_zero)
    : p_(p),
      precision_(precision),
      modulus_(modarith::prime_power(p, precision)),
      residue_(residue % modulus_),
      exact_zero_(exact_zero) {
  if (exact_zero_ && residue_ != 0) {
    throw Error(ErrorKind::MixedContext, "exact zero flag on a nonzero residue");
  }
}

PadicScalar PadicScalar::from_integer(i64 n, u32 p, int precision) {
  const u64 q = modarith::prime_power(p, precision);
  return PadicScalar(p, precision, modarith::reduce(n, q), n == 0);
}

PadicScalar PadicScalar::exact_zero_value(u32 p, int precision) {
  return PadicScalar(p, precision, 0, true);
}

PadicScalar PadicScalar::from_rational(i64 num, i64 den, u32 p, int precision) {
  if (den == 0) {
    throw Error(ErrorKind::NotIntegral, "zero denominator");
  }
  const u64 q = modarith::prime_power(p, precision);
  if (num == 0) return PadicScalar(p, precision, 0, true);
  i128 n = num, d = den;
  const int vd = modarith::valuation(d, p);
  const int vn = modarith::valuation(n, p);
  if (vd > vn) {
    throw Error(ErrorKind::NotIntegral, std::to_string(num) + "/" + std::to_string(den) +
                                            " is not in Z_" + std::to_string(p));
  }
  for (int i = 0; i < vd; ++i) {
    n /= p;
    d /= p;
  }
  const auto inv = modarith::inverse(modarith::reduce(d, q), q);
  return PadicScalar(p, precision, modarith::mul(modarith::reduce(n, q), *inv, q));
}

Valuation PadicScalar::valuation() const noexcept {
  if (exact_zero_) return {Valuation::Kind::exact_zero, precision_};
  if (residue_ == 0) return {Valuation::Kind::at_least_precision, precision_};
  return {Valuation::Kind::finite, modarith::valuation(residue_, p_, precision_)};
}

void PadicScalar::require_same_context(const PadicScalar& rhs) const {
  if (p_ != rhs.p_ || precision_ != rhs.precision_) {
    throw Error(ErrorKind::MixedContext,
                "Z_" + std::to_string(p_) + " mod p^" + std::to_string(precision_) + " vs Z_" +
                    std::to_string(rhs.p_) + " mod p^" + std::to_string(rhs.precision_));
  }
}

PadicScalar PadicScalar::operator+(const PadicScalar& rhs) const {
  require_same_context(rhs);
  return PadicScalar(p_, precision_, modarith::add(residue_, rhs.residue_, modulus_),
                     exact_zero_ && rhs.exact_zero_);
}

PadicScalar PadicScalar::operator-(const PadicScalar& rhs) const {
  require_same_context(rhs);
  return PadicScalar(p_, precision_, modarith::sub(residue_, rhs.residue_, modulus_),
                     exact_zero_ && rhs.exact_zero_);
}

PadicScalar PadicScalar::operator*(const PadicScalar& rhs) const {
  require_same_context(rhs);
  return PadicScalar(p_, precision_, modarith::mul(residue_, rhs.residue_, modulus_),
                     exact_zero_ || rhs.exact_zero_);
}

PadicScalar PadicScalar::operator-() const {
  return PadicScalar(p_, precision_, modarith::neg(residue_, modulus_), exact_zero_);
}

PadicScalar PadicScalar::inverse() const {
  if (!is_unit()) {
    throw Error(ErrorKind::NonUnit, to_string() + " has positive valuation");
  }
  return PadicScalar(p_, precision_, *modarith::inverse(residue_, modulus_));
}

PadicScalar PadicScalar::reduced(int new_precision) const {
  if (new_precision > precision_ || new_precision < 0) {
    throw Error(ErrorKind::MixedContext, "cannot raise precision from " +
                                             std::to_string(precision_) + " to " +
                                             std::to_string(new_precision));
  }
  return PadicScalar(p_, new_precision, residue_, exact_zero_);
}

std::string PadicScalar::to_string() const {
  return std::to_string(residue_) + " + O(" + std::to_string(p_) + "^" +
         std::to_string(precision_) + ")";
}

}  // namespace iwasawa
