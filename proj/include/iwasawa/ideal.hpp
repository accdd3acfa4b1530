#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace iwasawa {

/// A principal ideal of Lambda written as p^mu * X^a * prod Phi_n^b * (other
/// factors). The other factors are opaque names, compared textually.
struct FactoredIdeal {
  int mu = 0;
  int x_exponent = 0;
  std::map<int, int> phi;             // n >= 1 -> positive exponent
  std::map<std::string, int> others;  // name -> positive exponent

  /// Accepts "1", "(1)", "p", "p^2", "X", "X^3", "Phi_1", "Phi1^2" and
  /// products of these joined by '*', optionally wrapped in parentheses.
  /// Throws ParseError.
  static FactoredIdeal parse(std::string_view text);

  bool is_unit() const noexcept;
  FactoredIdeal operator*(const FactoredIdeal& rhs) const;
  bool divides(const FactoredIdeal& rhs) const;
  /// The same ideal with every power of X removed.
  FactoredIdeal without_x() const;

  /// Canonical text, the inverse of parse for the factors it knows: "1" for the unit ideal.
  std::string to_string() const;

  bool operator==(const FactoredIdeal&) const = default;
};

}  // namespace iwasawa
