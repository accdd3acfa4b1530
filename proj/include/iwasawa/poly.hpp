#pragma once

#include "iwasawa/padic.hpp"

#include <utility>
#include <vector>

// Dense polynomials over Z/q, coefficients stored low degree first. These are
// the raw kernels behind LambdaElement; they do no context checking.
namespace iwasawa::poly {

using Poly = std::vector<u64>;

/// Index of the highest nonzero coefficient, -1 for the zero polynomial.
int degree(const Poly& f) noexcept;
void trim(Poly& f);

Poly add(const Poly& a, const Poly& b, u64 q);
Poly sub(const Poly& a, const Poly& b, u64 q);
Poly mul(const Poly& a, const Poly& b, u64 q);
/// Product truncated to the first `length` coefficients.
Poly mul_truncated(const Poly& a, const Poly& b, std::size_t length, u64 q);
Poly scale(const Poly& a, u64 c, u64 q);
Poly from_signed(const std::vector<i64>& coeffs, u64 q);
/// Reduces every coefficient to a smaller modulus q_small | q.
Poly reduce_coefficients(const Poly& a, u64 q_small);

/// f = quotient * divisor + remainder with deg remainder < deg divisor. The
/// divisor must be monic (leading coefficient 1, given explicitly).
std::pair<Poly, Poly> divrem_monic(const Poly& f, const Poly& divisor, u64 q);
Poly rem_monic(const Poly& f, const Poly& divisor, u64 q);

/// Inverse power series of f modulo X^length; f(0) must be a unit mod q.
Poly series_inverse(const Poly& f, std::size_t length, u64 q);

/// Minimum p-adic valuation over the coefficients, capped at `cap`.
int content_valuation(const Poly& f, u32 p, int cap) noexcept;

/// (1+X)^n with coefficients mod q.
Poly one_plus_x_power(u64 n, u64 q);
/// The p^n-th cyclotomic polynomial in 1+X (monic, full coefficient list).
/// n = 0 gives X.
Poly cyclotomic(u32 p, int n, u64 q);
/// (1+X)^{p^n} - 1 = X * prod_{1<=i<=n} Phi_i.
Poly omega(u32 p, int n, u64 q);
/// X * prod of Phi_i over 1 <= i <= n with i of the given parity (0 even, 1 odd).
Poly omega_parity(u32 p, int n, int parity, u64 q);
/// prod of Phi_i over 1 <= i <= n with i of the given parity, without the X.
Poly phi_parity_product(u32 p, int n, int parity, u64 q);

}  // namespace iwasawa::poly
