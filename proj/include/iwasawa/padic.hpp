#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace iwasawa {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// Residue arithmetic modulo q < 2^62. Shared by every module that works in
// Z/p^M, so it lives next to the scalar type.
namespace modarith {

u64 prime_power(u32 p, int exponent);
u64 add(u64 a, u64 b, u64 q) noexcept;
u64 sub(u64 a, u64 b, u64 q) noexcept;
u64 mul(u64 a, u64 b, u64 q) noexcept;
u64 neg(u64 a, u64 q) noexcept;
u64 reduce(i128 x, u64 q) noexcept;
u64 pow(u64 base, u64 exponent, u64 q) noexcept;
std::optional<u64> inverse(u64 a, u64 q) noexcept;
/// v_p(x) capped at `cap`; x = 0 gives cap.
int valuation(u64 x, u32 p, int cap) noexcept;
/// v_p of a nonzero signed integer.
int valuation(i128 x, u32 p) noexcept;
/// Maps a residue to the symmetric range (-q/2, q/2].
i128 centered(u64 x, u64 q) noexcept;

}  // namespace modarith

struct Valuation {
  enum class Kind { finite, at_least_precision, exact_zero };
  Kind kind = Kind::finite;
  int value = 0;  // the precision M when not finite

  bool is_finite() const noexcept { return kind == Kind::finite; }
  bool operator==(const Valuation&) const = default;
};

/// An element of Z_p known modulo p^M. Precision is absolute; no operation
/// ever claims more digits than its inputs carried.
///
/// Zero has two states: `exact_zero` means the value is known to be 0 in
/// Z_p, while a zero residue without the flag only says "divisible by p^M".
class PadicScalar {
public:
  PadicScalar(u32 p, int precision, u64 residue, bool exact_zero = false);

  static PadicScalar from_integer(i64 n, u32 p, int precision);
  /// num/den as an element of Z_p; throws NotIntegral when v_p(den) > v_p(num).
  static PadicScalar from_rational(i64 num, i64 den, u32 p, int precision);
  static PadicScalar exact_zero_value(u32 p, int precision);

  u32 prime() const noexcept { return p_; }
  int precision() const noexcept { return precision_; }
  u64 modulus() const noexcept { return modulus_; }
  u64 residue() const noexcept { return residue_; }
  bool exact_zero() const noexcept { return exact_zero_; }

  Valuation valuation() const noexcept;
  bool is_unit() const noexcept { return residue_ % p_ != 0; }

  PadicScalar operator+(const PadicScalar& rhs) const;
  PadicScalar operator-(const PadicScalar& rhs) const;
  PadicScalar operator*(const PadicScalar& rhs) const;
  PadicScalar operator-() const;
  /// Throws NonUnit when the valuation is positive.
  PadicScalar inverse() const;
  /// Drops digits: the result is known modulo p^new_precision.
  PadicScalar reduced(int new_precision) const;

  bool operator==(const PadicScalar&) const = default;

  std::string to_string() const;

private:
  void require_same_context(const PadicScalar& rhs) const;

  u32 p_;
  int precision_;
  u64 modulus_;
  u64 residue_;
  bool exact_zero_;
};

}  // namespace iwasawa
