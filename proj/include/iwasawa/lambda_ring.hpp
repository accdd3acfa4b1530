#pragma once

#include "iwasawa/padic.hpp"
#include "iwasawa/poly.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace iwasawa {

/// The monic polynomial W such that elements live in Lambda/(p^M, W).
struct Modulus {
  enum class Kind { x_power, omega, custom };
  Kind kind = Kind::x_power;
  int level = -1;      // n for omega_n and its parity variants, -1 otherwise
  std::string label;   // "X^8", "omega_2", "omega_2^even", ...
  poly::Poly full;     // coefficients mod p^M including the leading 1
  bool x_divides = true;

  int degree() const noexcept { return static_cast<int>(full.size()) - 1; }
};

/// Prime, p-adic precision and X-truncation shared by a family of Lambda
/// elements. Always handled through shared_ptr<const>, so two elements are
/// compatible exactly when their contexts describe the same quotient ring.
class IwasawaContext {
public:
  static std::shared_ptr<const IwasawaContext> power_series(u32 p, int precision, int degree);
  static std::shared_ptr<const IwasawaContext> omega(u32 p, int precision, int level);
  /// Lambda/(p^M, omega_n^parity); parity 0 is the even-index product.
  static std::shared_ptr<const IwasawaContext> omega_parity(u32 p, int precision, int level,
                                                            int parity);
  /// Any monic W given with coefficients mod p^M (leading 1 included).
  static std::shared_ptr<const IwasawaContext> custom(u32 p, int precision, poly::Poly monic,
                                                      std::string label, bool x_divides);

  u32 prime() const noexcept { return p_; }
  int precision() const noexcept { return precision_; }
  u64 modulus_value() const noexcept { return q_; }
  /// The fixed topological generator of 1 + pZ_p, as an integer.
  u64 gamma() const noexcept { return 1 + static_cast<u64>(p_); }
  const Modulus& modulus() const noexcept { return modulus_; }
  int degree() const noexcept { return modulus_.degree(); }

  bool same_ring(const IwasawaContext& other) const noexcept;
  std::string describe() const;

private:
  IwasawaContext(u32 p, int precision, Modulus modulus);

  u32 p_;
  int precision_;
  u64 q_;
  Modulus modulus_;
};

using ContextPtr = std::shared_ptr<const IwasawaContext>;

/// A truncated element of Z_p[[X]]: the representative of degree < deg W in
/// Lambda/(p^M, W). `exact_zero_constant` records that the constant term is
/// known to vanish in Z_p, not merely modulo p^M.
class LambdaElement {
public:
  explicit LambdaElement(ContextPtr ctx);
  /// Residues longer than deg W are reduced modulo W.
  LambdaElement(ContextPtr ctx, poly::Poly residues, bool exact_zero_constant = false);
  static LambdaElement from_integers(ContextPtr ctx, const std::vector<i64>& coeffs,
                                     bool exact_zero_constant = false);
  static LambdaElement one(ContextPtr ctx);

  const IwasawaContext& context() const noexcept { return *ctx_; }
  const ContextPtr& context_ptr() const noexcept { return ctx_; }
  int length() const noexcept { return static_cast<int>(coeffs_.size()); }
  const poly::Poly& residues() const noexcept { return coeffs_; }
  u64 residue(int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
  PadicScalar coefficient(int i) const;
  /// The value at X = 0, carrying the exact-zero flag.
  PadicScalar constant_term() const;
  bool exact_zero_constant() const noexcept { return exact_zero_constant_; }
  LambdaElement with_exact_zero_constant(bool flag) const;

  bool is_zero() const noexcept;
  /// Highest index with a nonzero residue, -1 for zero.
  int poly_degree() const noexcept { return poly::degree(coeffs_); }

  LambdaElement operator+(const LambdaElement& rhs) const;
  LambdaElement operator-(const LambdaElement& rhs) const;
  LambdaElement operator*(const LambdaElement& rhs) const;
  LambdaElement operator-() const;
  LambdaElement operator*(const PadicScalar& c) const;
  LambdaElement scaled(i64 c) const;

  /// Image in a coarser quotient: the target modulus must divide this one and
  /// the target precision must not exceed ours. Never extends.
  LambdaElement reduce_to(const ContextPtr& target) const;

  /// Residue equality (flags are ignored).
  bool operator==(const LambdaElement& rhs) const;

  std::string to_string() const;

private:
  void require_same_ring(const LambdaElement& rhs) const;

  ContextPtr ctx_;
  poly::Poly coeffs_;
  bool exact_zero_constant_ = false;
};

/// Phi_n in the given context (Phi_0 = X). TruncationTooSmall when its degree
/// does not fit below the context modulus.
LambdaElement phi(const ContextPtr& ctx, int n);
LambdaElement omega(const ContextPtr& ctx, int n);
/// X times the product of Phi_i, 1 <= i <= n, over indices of one parity.
LambdaElement omega_signed(const ContextPtr& ctx, int n, int parity);

/// Degree of Phi_n, that is p^{n-1}(p-1); 1 for n = 0.
u64 phi_degree(u32 p, int n);

struct DivRem {
  LambdaElement quotient;
  LambdaElement remainder;
  int certified_digits = 0;  // p-adic digits of the quotient/remainder pair
};

/// F = Q*P + R with deg R < deg P for a distinguished P. The division is done
/// on the representative of F; when P does not divide the context modulus the
/// result depends on that choice, which the certified digit count reflects.
DivRem divrem(const LambdaElement& f, const LambdaElement& divisor);

struct InvariantReport {
  std::optional<int> mu;
  std::optional<int> lambda;
  bool mu_certified = false;  // true when a unit coefficient was seen, i.e. mu = 0
  /// Monic, degree lambda, coefficients known mod p^{certified_digits}.
  std::optional<LambdaElement> distinguished_part;
  std::optional<LambdaElement> unit_part;
  int certified_digits = 0;
  int certified_length = 0;  // X-truncation of the input

  bool conclusive() const noexcept { return mu.has_value() && lambda.has_value(); }
};

/// mu = least coefficient valuation, lambda = least index attaining it, and
/// the factorisation F = p^mu * P * U, re-verified by multiplication.
InvariantReport weierstrass(const LambdaElement& f);

struct LambdaGcd {
  int mu = 0;
  bool mu_certified = false;
  int x_exponent = 0;
  bool x_certified = false;
  std::map<int, int> phi_exponents;  // n >= 1 -> exponent
  std::optional<LambdaElement> residual;
  bool residual_certified = true;
  int certified_digits = 0;

  bool certified() const noexcept {
    return mu_certified && x_certified && phi_exponents.empty() && residual_certified;
  }
  /// "p^mu*X^a*Phi_n^b*(residual)", or "1".
  std::string to_string() const;
};

/// gcd in Lambda of two elements with conclusive invariants, written as
/// p^mu * X^a * prod Phi_n^b * residual. Throws PrecisionExhausted when the
/// inputs are inconclusive or the Euclidean step runs out of digits.
LambdaGcd gcd_lambda(const LambdaElement& f, const LambdaElement& g);

}  // namespace iwasawa
