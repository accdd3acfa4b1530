#pragma once

#include "iwasawa/module_model.hpp"
#include "iwasawa/real.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace iwasawa {

struct PeriodData {
  double omega_plus = 0;   // positive real
  double omega_minus = 0;  // positive imaginary part
};

struct CurveData {
  std::string label;
  std::array<i64, 5> a{};  // a1, a2, a3, a4, a6
  i64 conductor = 0;
  int rank = 0;
  RankSequence e_sequence;
  /// Sign of the functional equation of L(E, s).
  int fricke_sign = 1;
  int torsion_bound = 1;
  std::optional<PeriodData> periods;
};

struct CurveInvariants {
  i128 b2, b4, b6, b8, c4, c6, discriminant;
};

CurveInvariants invariants(const CurveData& e);

/// Parses the curve JSON schema; validates shape and a nonzero discriminant.
/// Throws ParseError or SingularCurve.
CurveData parse_curve(const std::string& json_text);
/// parse_curve on a file, additionally re-deriving the conductor with Tate's
/// algorithm (ConductorMismatch on disagreement). IoError if unreadable.
CurveData ingest_curve(const std::filesystem::path& file);

struct LocalReduction {
  int conductor_exponent = 0;
  int discriminant_valuation = 0;  // of the minimal model
  std::string kodaira;             // "I0", "I3", "II", "I1*", "IV*", ...
  bool multiplicative = false;
  bool split = false;  // meaningful when multiplicative
};

/// Tate's algorithm at p (p = 2 and 3 included).
LocalReduction tate(const CurveData& e, u32 p);
/// prod p^{f_p} over primes dividing the discriminant.
i64 conductor_via_tate(const CurveData& e);

/// a_l = l + 1 - #E(F_l) by exhaustive counting. BadReduction when l | N.
i64 a_ell(const CurveData& e, u32 ell);

/// a_1..a_nmax (index 0 unused) from point counts at good primes, the
/// reduction type at bad primes, the prime-power recursion and
/// multiplicativity. `threads` = 0 picks the hardware concurrency.
std::vector<i64> an_expansion(const CurveData& e, u64 nmax, unsigned threads = 0);

enum class ReductionKind { good_ordinary, good_supersingular, multiplicative, additive };
std::string_view to_string(ReductionKind kind) noexcept;

struct ReductionInfo {
  ReductionKind kind = ReductionKind::good_ordinary;
  i64 a_p = 0;
  int a_p_valuation = 0;  // v_p(a_p), capped at 64 when a_p = 0
  bool split = false;
};

ReductionInfo classify_reduction(const CurveData& e, u32 p);

struct Periods {
  Real omega1;          // least positive real period
  Real omega2_imag;     // imaginary part of the second basis vector
  int real_components;  // 2 when the discriminant is positive
  Real omega_plus;      // omega1 * real_components
  Real omega_minus;     // 2 * omega2_imag
};

/// Period lattice via the arithmetic-geometric mean. Works at the current
/// default precision, raised to `digits` plus guard digits inside.
Periods periods(const CurveData& e, unsigned digits);

/// Evaluates the Fricke functional equation f(i/(N t)) = w N t^2 f(i t) at a
/// point off the fixed line and returns |lhs - rhs| / |lhs|. Throws
/// RootNumberMismatch when the ingested sign does not fit.
double check_root_number(const CurveData& e, const std::vector<i64>& an, unsigned digits);

}  // namespace iwasawa
