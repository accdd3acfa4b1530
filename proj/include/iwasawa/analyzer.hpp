#pragma once

#include "iwasawa/ideal.hpp"
#include "iwasawa/module_model.hpp"
#include "iwasawa/signed_extract.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace iwasawa {

/// gcd of a signed pair as p^mu * X^a * prod Phi_n^b * residual.
struct GcdReport {
  int mu = 0;
  int x_exponent = 0;
  std::map<int, int> phi_exponents;
  std::optional<LambdaElement> residual;  // nullopt means the residual is 1
  bool certified = false;
  int certified_digits = 0;
  /// "euclid" when both series were conclusive, "x-divisibility" when the
  /// answer was read off a single series of the form X * unit.
  std::string method;

  FactoredIdeal ideal() const;
  std::string to_string() const;
};

/// Delegates to gcd_lambda when both series are conclusive. With only one
/// conclusive series the gcd is still decided when that series is a unit, or
/// X times a unit while the other has an exactly vanishing constant term.
/// Every result is checked to divide both series at its certified precision.
/// Throws PrecisionExhausted otherwise.
GcdReport gcd_signed_pair(const SignedPair& pair);
GcdReport gcd_series(const LambdaElement& f, const LambdaElement& g);

enum class CheckStatus { pass, fail, inconclusive };
std::string_view to_string(CheckStatus status) noexcept;

struct Check {
  std::string name;
  CheckStatus status = CheckStatus::inconclusive;
  std::string detail;

  bool operator==(const Check&) const = default;
};

struct Verdict {
  std::vector<Check> checks;
  std::optional<int> delta_e;  // set only when the X-gcd comparison is conclusive

  /// fail if any check failed, else inconclusive if any was, else pass.
  CheckStatus overall() const noexcept;
};

/// "kp": gcd = kp_ideal(e); "gr": fine_char = gr_ideal(e); "xgcd": gcd =
/// X^delta * fine_char for some delta in {0, 1}, recording delta.
Verdict compare_predictions(const GcdReport& gcd, const RankSequence& e, const FactoredIdeal& fine_char);

/// For every irreducible factor coprime to X (p when mu > 0, each Phi_n, each
/// residual factor) of the gcd, it must divide fine_char, and conversely. One
/// check per factor; a single vacuous PASS when there are none.
Verdict theorem_consistency(const GcdReport& gcd, const FactoredIdeal& fine_char);

struct Report {
  std::string curve;
  int p = 0;
  std::vector<std::pair<std::string, std::string>> config;          // reproducibility header
  std::vector<std::pair<std::string, std::string>> certification;   // per stage
  std::optional<GcdReport> gcd;
  std::vector<Verdict> verdicts;

  std::optional<int> delta_e() const;
  CheckStatus overall() const noexcept;
};

enum class ReportFormat { json, csv };

/// Deterministic text with a fixed key order.
std::string render_report(const Report& report, ReportFormat format);
/// Writes render_report to a file; IoError when it cannot be written.
void emit_report(const Report& report, ReportFormat format, const std::filesystem::path& file);

/// Reads back the JSON form. The gcd residual comes back as text only, so the
/// parsed report carries `gcd_text` rather than a LambdaElement.
struct ParsedReport {
  std::string curve;
  int p = 0;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, std::string>> certification;
  std::optional<int> mu, x_exponent;
  std::map<int, int> phi_exponents;
  std::string residual;
  std::optional<int> delta_e;
  std::vector<Check> checks;
  std::string verdict;

  bool operator==(const ParsedReport&) const = default;
};
ParsedReport parse_report_json(const std::string& text);

}  // namespace iwasawa
