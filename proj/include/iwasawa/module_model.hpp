#pragma once

#include "iwasawa/ideal.hpp"
#include "iwasawa/lambda_ring.hpp"

#include <string>
#include <vector>

namespace iwasawa {

/// An irreducible distinguished polynomial with exact integer coefficients
/// (low degree first, leading 1 included).
class DistinguishedFactor {
public:
  /// Validates monic with non-leading coefficients divisible by p; throws
  /// NotDistinguished otherwise. Irreducibility is the caller's promise.
  DistinguishedFactor(u32 p, std::vector<i64> coeffs, std::string name);
  static DistinguishedFactor x(u32 p);
  static DistinguishedFactor phi(u32 p, int n);

  u32 prime() const noexcept { return p_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<i64>& coefficients() const noexcept { return coeffs_; }
  const std::string& name() const noexcept { return name_; }
  LambdaElement as_element(const ContextPtr& ctx) const;

  bool operator==(const DistinguishedFactor& rhs) const { return coeffs_ == rhs.coeffs_; }

private:
  u32 p_;
  std::vector<i64> coeffs_;
  std::string name_;
};

/// Lambda^r + sum Lambda/p^{a_i} + sum Lambda/(F_i^{b_i}).
struct ElementaryModule {
  struct PolyPart {
    DistinguishedFactor factor;
    int exponent;
  };

  u32 p = 3;
  std::vector<int> p_part;
  std::vector<PolyPart> poly_part;
  int free_rank = 0;

  int mu() const noexcept;
  int lambda() const noexcept;
  ElementaryModule torsion_part() const;
  ElementaryModule direct_sum(const ElementaryModule& other) const;
};

/// An irreducible element of Lambda: either p or a distinguished factor.
struct IrreducibleElement {
  bool is_p = false;
  std::optional<DistinguishedFactor> factor;

  static IrreducibleElement prime_element() { return {true, std::nullopt}; }
  static IrreducibleElement from(DistinguishedFactor f) { return {false, std::move(f)}; }
};

/// e_0, e_1, ...; entries past the end are zero.
struct RankSequence {
  std::vector<int> e;
  int at(std::size_t n) const noexcept { return n < e.size() ? e[n] : 0; }
};

/// Generator p^{sum a_i} * prod F_i^{b_i} of the characteristic ideal, in a
/// power-series context wide enough to hold it exactly. NotTorsion if r > 0.
LambdaElement char_ideal(const ElementaryModule& m);
/// The same ideal in factored form (X and Phi_n recognised by coefficients).
FactoredIdeal char_ideal_factored(const ElementaryModule& m);

struct FinitenessCheck {
  bool by_divisibility = false;  // f does not divide the generator
  bool by_factors = false;       // no summand is killed by a power of f
  bool agree() const noexcept { return by_divisibility == by_factors; }
  bool finite() const noexcept { return by_divisibility; }
};

/// Whether M[f] is finite, decided twice: by a divisibility test on the
/// characteristic generator of M_tor and by inspecting the summands.
FinitenessCheck f_torsion_finite(const ElementaryModule& m, const IrreducibleElement& f);

struct SesCheck {
  bool multiplicative = false;  // Char(A) Char(C_tor) = Char(B_tor)
  std::string detail;
};

/// For 0 -> A -> B -> C -> 0 with B given in elementary form, compares the
/// characteristic ideals. NotTorsion when A has positive rank.
SesCheck ses_char_check(const ElementaryModule& a, const ElementaryModule& b,
                        const ElementaryModule& c);

/// The two coprimality implications for the same sequence and an irreducible f:
/// f coprime to Char(B_tor) forces f coprime to Char(A_tor); f coprime to
/// both Char(A_tor) and Char(C_tor) forces f coprime to Char(B_tor).
struct SesCoprimality {
  bool sub_from_middle = true;
  bool middle_from_ends = true;
};
SesCoprimality ses_coprimality_check(const ElementaryModule& a, const ElementaryModule& b,
                                     const ElementaryModule& c, const IrreducibleElement& f);

/// prod over n >= 0 with e_n >= 1 of Phi_n^{e_n - 1}, where Phi_0 = X.
FactoredIdeal gr_ideal(const RankSequence& e);
/// X^{e_0} * prod over n >= 1 with e_n >= 1 of Phi_n^{e_n - 1}.
FactoredIdeal kp_ideal(const RankSequence& e);

}  // namespace iwasawa
