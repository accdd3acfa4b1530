#include "iwasawa/ideal.hpp"

#include "iwasawa/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace iwasawa {

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s, std::string_view whole) {
  int v = 0;
  s = strip(s);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) {
    throw Error(ErrorKind::ParseError, "bad exponent in ideal '" + std::string(whole) + "'");
  }
  return v;
}

void bump(std::map<int, int>& m, int key, int by) {
  if (by > 0) m[key] += by;
}

}  // namespace

FactoredIdeal FactoredIdeal::parse(std::string_view text) {
  const std::string_view whole = text;
  std::string_view s = strip(text);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = strip(s.substr(1, s.size() - 2));
  if (s.empty()) throw Error(ErrorKind::ParseError, "empty ideal");
  FactoredIdeal out;
  while (!s.empty()) {
    const auto star = s.find('*');
    std::string_view tok = strip(s.substr(0, star));
    s = star == std::string_view::npos ? std::string_view{} : s.substr(star + 1);
    if (tok.empty()) throw Error(ErrorKind::ParseError, "empty factor in '" + std::string(whole) + "'");
    int exponent = 1;
    if (const auto caret = tok.find('^'); caret != std::string_view::npos) {
      exponent = parse_int(tok.substr(caret + 1), whole);
      tok = strip(tok.substr(0, caret));
    }
    if (tok == "1") {
      continue;
    } else if (tok == "p") {
      out.mu += exponent;
    } else if (tok == "X") {
      out.x_exponent += exponent;
    } else if (tok.starts_with("Phi")) {
      std::string_view idx = tok.substr(3);
      if (!idx.empty() && idx.front() == '_') idx.remove_prefix(1);
      const int n = parse_int(idx, whole);
      if (n == 0) {
        out.x_exponent += exponent;
      } else {
        bump(out.phi, n, exponent);
      }
    } else {
      throw Error(ErrorKind::ParseError,
                  "unknown factor '" + std::string(tok) + "' in '" + std::string(whole) + "'");
    }
  }
  return out;
}

bool FactoredIdeal::is_unit() const noexcept {
  return mu == 0 && x_exponent == 0 && phi.empty() && others.empty();
}

FactoredIdeal FactoredIdeal::operator*(const FactoredIdeal& rhs) const {
  FactoredIdeal out = *this;
  out.mu += rhs.mu;
  out.x_exponent += rhs.x_exponent;
  for (const auto& [n, e] : rhs.phi) out.phi[n] += e;
  for (const auto& [name, e] : rhs.others) out.others[name] += e;
  return out;
}

bool FactoredIdeal::divides(const FactoredIdeal& rhs) const {
  if (mu > rhs.mu || x_exponent > rhs.x_exponent) return false;
  for (const auto& [n, e] : phi) {
    const auto it = rhs.phi.find(n);
    if (it == rhs.phi.end() || it->second < e) return false;
  }
  for (const auto& [name, e] : others) {
    const auto it = rhs.others.find(name);
    if (it == rhs.others.end() || it->second < e) return false;
  }
  return true;
}

FactoredIdeal FactoredIdeal::without_x() const {
  FactoredIdeal out = *this;
  out.x_exponent = 0;
  return out;
}

std::string FactoredIdeal::to_string() const {
  std::vector<std::string> parts;
  auto power = [](const std::string& base, int e) {
    return e == 1 ? base : base + "^" + std::to_string(e);
  };
  if (mu > 0) parts.push_back(power("p", mu));
  if (x_exponent > 0) parts.push_back(power("X", x_exponent));
  for (const auto& [n, e] : phi) parts.push_back(power("Phi_" + std::to_string(n), e));
  for (const auto& [name, e] : others) parts.push_back(power("(" + name + ")", e));
  if (parts.empty()) return "1";
  std::string out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out += "*" + parts[i];
  return out;
}

}  // namespace iwasawa
