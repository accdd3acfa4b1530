#pragma once

#include "iwasawa/curve.hpp"
#include "iwasawa/real.hpp"

#include <boost/rational.hpp>

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace iwasawa {

using Rational = boost::rational<i64>;

/// Normalized real and imaginary parts of the period integral at a/m.
struct ModularSymbol {
  i64 a = 0;
  i64 m = 1;
  Rational plus;
  Rational minus;
  bool operator==(const ModularSymbol&) const = default;
};

/// Lazily grown a_n table. Requests beyond `limit` throw
/// CoefficientSupplyExhausted.
class AnSupply {
public:
  explicit AnSupply(CurveData curve, u64 limit = 2'000'000);
  const std::vector<i64>& at_least(u64 count);
  u64 available() const noexcept { return an_.empty() ? 0 : an_.size() - 1; }
  u64 limit() const noexcept { return limit_; }
  const CurveData& curve() const noexcept { return curve_; }

private:
  CurveData curve_;
  u64 limit_;
  std::vector<i64> an_;
};

struct PeriodIntegral {
  Complex value;
  double error_bound = 0;  // truncated tails plus rounding
  u64 terms = 0;
};

/// sum_n a_n/n e^{2 pi i n r} continued to the cusp r = a/m, evaluated by
/// splitting the path at height h/(m sqrt N) (h = height_factor) and moving
/// the lower piece up with the Fricke involution. The result is accurate to
/// about 10^-digits.
PeriodIntegral period_integral(AnSupply& supply, i64 a, i64 m, unsigned digits,
                               double height_factor = 1.0);

/// The same values for every a in [0, m) at once, m = p^k coprime to N, via
/// residue-class sums and a radix-p DFT. Entry a is meaningful when gcd(a, m) = 1.
std::vector<Complex> level_integrals(AnSupply& supply, u32 p, int k, unsigned digits);

/// Continued-fraction recognition: the first convergent h/k with k <= bound
/// and |x - h/k| < tolerance.
std::optional<Rational> recognize(const Real& x, i64 bound, const Real& tolerance);

/// Symbols [a/p^k]^{+-} for one curve and prime: [0/1] and every a coprime
/// to p at levels 1..max_level.
class SymbolTable {
public:
  enum class Provenance { computed, imported };

  SymbolTable() = default;
  SymbolTable(std::string label, u32 p, Provenance provenance = Provenance::computed);

  const std::string& label() const noexcept { return label_; }
  u32 prime() const noexcept { return p_; }
  int max_level() const noexcept { return max_level_; }
  Provenance provenance() const noexcept { return provenance_; }

  /// Stores [a/p^k]; k = 0 stores [0/1]. `a` is reduced mod p^k.
  void set(int k, i64 a, Rational plus, Rational minus);
  /// [a/p^k] after reducing the fraction; [b/1] is [0/1]. IncompleteTable
  /// when the entry is missing.
  const ModularSymbol& at(int k, i64 a) const;
  bool contains(int k, i64 a) const;
  /// Every unit residue present at levels 1..level, and [0/1].
  bool complete_through(int level) const;

  const std::map<std::pair<int, i64>, ModularSymbol>& entries() const noexcept { return entries_; }
  bool operator==(const SymbolTable& rhs) const { return label_ == rhs.label_ && p_ == rhs.p_ && entries_ == rhs.entries_; }

private:
  std::string label_;
  u32 p_ = 0;
  int max_level_ = 0;
  Provenance provenance_ = Provenance::computed;
  std::map<std::pair<int, i64>, ModularSymbol> entries_;
};

struct SymbolOptions {
  unsigned digits = 30;
  int precision = 8;                     // p-adic precision M, sets the default bound
  std::optional<i64> denominator_bound;  // overrides torsion^2 * 2 * p^ceil(M/2)
  u64 coefficient_limit = 2'000'000;
};

i64 default_denominator_bound(const CurveData& e, u32 p, int precision);

/// Computes symbols numerically and recognizes them as rationals, raising the
/// working precision once by 20 digits before giving up with RecognitionFailed.
class SymbolEngine {
public:
  SymbolEngine(const CurveData& curve, u32 p, SymbolOptions options = {});

  ModularSymbol symbol(i64 a, int k);
  /// Table through `max_level`, one DFT per level.
  SymbolTable table(int max_level);

  const Periods& periods_at(unsigned digits);
  AnSupply& supply() noexcept { return supply_; }
  i64 denominator_bound() const noexcept { return bound_; }

private:
  std::optional<ModularSymbol> try_recognize(i64 a, i64 m, const Complex& value, unsigned digits);

  CurveData curve_;
  u32 p_;
  SymbolOptions options_;
  i64 bound_;
  AnSupply supply_;
  std::map<unsigned, Periods> periods_;
};

struct HeckeReport {
  bool passed = true;
  int level = 0;
  std::vector<std::string> violations;  // "a=5 plus: lhs 1/2 rhs 0"
};

/// a_p [a/p^n] = [a/p^{n-1}] + sum_{k mod p} [(a + k p^n)/p^{n+1}] for every
/// a at level n, both signs, exactly. IncompleteTable if level n+1 is missing.
HeckeReport validate_hecke(const SymbolTable& table, i64 a_p, int n);

/// Plus symbols even and minus symbols odd under a -> -a. Returns the
/// offending entries.
std::vector<std::string> check_symmetry(const SymbolTable& table);

/// CSV: a "curve,p" header line and its values, then one row per symbol.
void write_table(const SymbolTable& table, std::ostream& out);
void export_table(const SymbolTable& table, const std::filesystem::path& file);
/// ParseError (with line number) on malformed input; ContextMismatch when the
/// header names a different curve or prime than expected.
SymbolTable import_table(const std::filesystem::path& file,
                         const std::optional<std::string>& expected_label = std::nullopt,
                         std::optional<u32> expected_p = std::nullopt);

}  // namespace iwasawa
