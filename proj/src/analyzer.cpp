#include "iwasawa/analyzer.hpp"
#include "iwasawa/error.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace iwasawa {

using nlohmann::ordered_json;
using poly::Poly;

FactoredIdeal GcdReport::ideal() const {
  FactoredIdeal out;
  out.mu = mu;
  out.x_exponent = x_exponent;
  out.phi = phi_exponents;
  if (residual) out.others["(" + residual->to_string() + ")"] = 1;
  return out;
}

std::string GcdReport::to_string() const { return ideal().to_string(); }

namespace {

// The monic part X^a * prod Phi_n^b * residual of a gcd, mod q.
Poly monic_generator(const GcdReport& g, u32 p, u64 q) {
  Poly out{1 % q};
  for (int i = 0; i < g.x_exponent; ++i) out = poly::mul(out, Poly{0, 1 % q}, q);
  for (const auto& [n, e] : g.phi_exponents) {
    for (int i = 0; i < e; ++i) out = poly::mul(out, poly::cyclotomic(p, n, q), q);
  }
  if (g.residual) out = poly::mul(out, poly::reduce_coefficients(g.residual->residues(), q), q);
  return out;
}

void require_divides(const GcdReport& g, const LambdaElement& f, const char* which) {
  const u32 p = f.context().prime();
  const int digits = std::min(g.certified_digits, f.context().precision());
  if (digits < 1) throw Error(ErrorKind::PrecisionExhausted, "gcd carries no certified digits");
  const u64 q = modarith::prime_power(p, digits);
  const Poly fr = poly::reduce_coefficients(f.residues(), q);
  const bool content_ok = g.mu == 0 || poly::content_valuation(fr, p, digits) >= std::min(g.mu, digits);
  const Poly r = poly::rem_monic(fr, monic_generator(g, p, q), q);
  if (!content_ok || poly::degree(r) >= 0) {
    throw Error(ErrorKind::PrecisionExhausted,
                "gcd " + g.to_string() + " does not divide the " + which + " series mod p^" + std::to_string(digits));
  }
}

GcdReport from_lambda_gcd(const LambdaGcd& g) {
  GcdReport out;
  out.mu = g.mu;
  out.x_exponent = g.x_exponent;
  out.phi_exponents = g.phi_exponents;
  out.residual = g.residual;
  out.certified = g.certified();
  out.certified_digits = g.certified_digits;
  out.method = "euclid";
  return out;
}

}  // namespace

GcdReport gcd_series(const LambdaElement& f, const LambdaElement& g) {
  const InvariantReport rf = weierstrass(f);
  const InvariantReport rg = weierstrass(g);
  GcdReport out;
  if (rf.conclusive() && rg.conclusive()) {
    out = from_lambda_gcd(gcd_lambda(f, g));
  } else if (rf.conclusive() || rg.conclusive()) {
    const InvariantReport& known = rf.conclusive() ? rf : rg;
    const LambdaElement& known_series = rf.conclusive() ? f : g;
    const LambdaElement& other = rf.conclusive() ? g : f;
    out.method = "x-divisibility";
    out.certified_digits = known.certified_digits;
    if (*known.mu != 0) {
      throw Error(ErrorKind::PrecisionExhausted, "one series vanishes at this precision and the other has mu > 0");
    }
    if (*known.lambda == 0) {
      out.certified = true;
    } else if (*known.lambda == 1 && known_series.exact_zero_constant() && other.exact_zero_constant()) {
      // The known series is X times a unit and X divides the other exactly.
      out.x_exponent = 1;
      out.certified = true;
    } else {
      throw Error(ErrorKind::PrecisionExhausted, "one series vanishes at this precision; lambda of the other is " +
                                                     std::to_string(*known.lambda));
    }
  } else {
    throw Error(ErrorKind::PrecisionExhausted, "both series vanish at this precision");
  }
  require_divides(out, f, "first");
  require_divides(out, g, "second");
  return out;
}

GcdReport gcd_signed_pair(const SignedPair& pair) {
  if (pair.series.size() != 2) throw Error(ErrorKind::Usage, "a signed pair has two series");
  return gcd_series(pair.series[0].series, pair.series[1].series);
}

std::string_view to_string(CheckStatus status) noexcept {
  switch (status) {
    case CheckStatus::pass: return "PASS";
    case CheckStatus::fail: return "FAIL";
    case CheckStatus::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

namespace {

CheckStatus combine(CheckStatus a, CheckStatus b) noexcept {
  if (a == CheckStatus::fail || b == CheckStatus::fail) return CheckStatus::fail;
  if (a == CheckStatus::inconclusive || b == CheckStatus::inconclusive) return CheckStatus::inconclusive;
  return CheckStatus::pass;
}

CheckStatus status_of(bool ok) { return ok ? CheckStatus::pass : CheckStatus::fail; }

FactoredIdeal x_power(int a) {
  FactoredIdeal out;
  out.x_exponent = a;
  return out;
}

// Irreducible factors coprime to X, each with exponent one.
std::vector<std::pair<std::string, FactoredIdeal>> coprime_to_x_factors(const FactoredIdeal& ideal) {
  std::vector<std::pair<std::string, FactoredIdeal>> out;
  if (ideal.mu > 0) {
    FactoredIdeal f;
    f.mu = 1;
    out.emplace_back("p", f);
  }
  for (const auto& [n, e] : ideal.phi) {
    FactoredIdeal f;
    f.phi[n] = 1;
    out.emplace_back("Phi_" + std::to_string(n), f);
  }
  for (const auto& [name, e] : ideal.others) {
    FactoredIdeal f;
    f.others[name] = 1;
    out.emplace_back(name, f);
  }
  return out;
}

}  // namespace

CheckStatus Verdict::overall() const noexcept {
  CheckStatus s = CheckStatus::pass;
  for (const auto& c : checks) s = combine(s, c.status);
  return s;
}

Verdict compare_predictions(const GcdReport& gcd, const RankSequence& e, const FactoredIdeal& fine_char) {
  Verdict v;
  const FactoredIdeal g = gcd.ideal();
  const FactoredIdeal kp = kp_ideal(e);
  const FactoredIdeal gr = gr_ideal(e);

  if (gcd.certified) {
    v.checks.push_back({"kp", status_of(g == kp), "gcd " + g.to_string() + ", predicted " + kp.to_string()});
  } else {
    v.checks.push_back({"kp", CheckStatus::inconclusive, "gcd " + g.to_string() + " is not certified"});
  }
  v.checks.push_back(
      {"gr", status_of(fine_char == gr), "fine_char " + fine_char.to_string() + ", predicted " + gr.to_string()});

  if (!gcd.certified) {
    v.checks.push_back({"xgcd", CheckStatus::inconclusive, "gcd " + g.to_string() + " is not certified"});
    return v;
  }
  for (int delta : {0, 1}) {
    if (g == x_power(delta) * fine_char) {
      v.delta_e = delta;
      v.checks.push_back({"xgcd", CheckStatus::pass,
                          "gcd = X^" + std::to_string(delta) + " * " + fine_char.to_string() + ", delta_E = " +
                              std::to_string(delta)});
      return v;
    }
  }
  v.checks.push_back({"xgcd", CheckStatus::fail,
                      "gcd " + g.to_string() + " is neither fine_char nor X * fine_char (" + fine_char.to_string() +
                          ")"});
  return v;
}

Verdict theorem_consistency(const GcdReport& gcd, const FactoredIdeal& fine_char) {
  Verdict v;
  const FactoredIdeal g = gcd.ideal();
  const CheckStatus pending = gcd.certified ? CheckStatus::pass : CheckStatus::inconclusive;
  const std::string suffix = gcd.certified ? "" : " (gcd not certified)";
  for (const auto& [name, f] : coprime_to_x_factors(g)) {
    const bool ok = f.divides(fine_char);
    v.checks.push_back({"theorem:" + name + "|gcd=>fine_char", gcd.certified ? status_of(ok) : pending,
                        name + (ok ? " divides " : " does not divide ") + "fine_char " + fine_char.to_string() + suffix});
  }
  for (const auto& [name, f] : coprime_to_x_factors(fine_char)) {
    const bool ok = f.divides(g);
    v.checks.push_back({"theorem:" + name + "|fine_char=>gcd", gcd.certified ? status_of(ok) : pending,
                        name + (ok ? " divides " : " does not divide ") + "gcd " + g.to_string() + suffix});
  }
  if (v.checks.empty()) {
    v.checks.push_back({"theorem", pending, "no factor coprime to X on either side" + suffix});
  }
  return v;
}

std::optional<int> Report::delta_e() const {
  for (const auto& v : verdicts) {
    if (v.delta_e) return v.delta_e;
  }
  return std::nullopt;
}

CheckStatus Report::overall() const noexcept {
  CheckStatus s = CheckStatus::pass;
  for (const auto& v : verdicts) s = combine(s, v.overall());
  return s;
}

namespace {

ordered_json pairs_to_json(const std::vector<std::pair<std::string, std::string>>& xs) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : xs) j[k] = v;
  return j;
}

std::vector<std::pair<std::string, std::string>> pairs_from_json(const ordered_json& j) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, v] : j.items()) out.emplace_back(k, v.get<std::string>());
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

CheckStatus parse_status(const std::string& s) {
  if (s == "PASS") return CheckStatus::pass;
  if (s == "FAIL") return CheckStatus::fail;
  if (s == "INCONCLUSIVE") return CheckStatus::inconclusive;
  throw Error(ErrorKind::ParseError, "unknown check status '" + s + "'");
}

}  // namespace

std::string render_report(const Report& report, ReportFormat format) {
  if (format == ReportFormat::csv) {
    std::string out = "name,status,detail\n";
    for (const auto& v : report.verdicts) {
      for (const auto& c : v.checks) {
        out += csv_field(c.name) + "," + std::string(to_string(c.status)) + "," + csv_field(c.detail) + "\n";
      }
    }
    return out;
  }

  ordered_json j;
  j["curve"] = report.curve;
  j["p"] = report.p;
  j["config"] = pairs_to_json(report.config);
  j["certification"] = pairs_to_json(report.certification);
  if (report.gcd) {
    ordered_json phi = ordered_json::object();
    for (const auto& [n, e] : report.gcd->phi_exponents) phi[std::to_string(n)] = e;
    j["gcd"] = {{"mu", report.gcd->mu},
                {"x", report.gcd->x_exponent},
                {"phi", phi},
                {"residual", report.gcd->residual ? report.gcd->residual->to_string() : "1"}};
  } else {
    j["gcd"] = nullptr;
  }
  const auto delta = report.delta_e();
  j["delta_E"] = delta ? ordered_json(*delta) : ordered_json(nullptr);
  ordered_json checks = ordered_json::array();
  for (const auto& v : report.verdicts) {
    for (const auto& c : v.checks) checks.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}});
  }
  j["checks"] = checks;
  j["verdict"] = to_string(report.overall());
  return j.dump(2) + "\n";
}

void emit_report(const Report& report, ReportFormat format, const std::filesystem::path& file) {
  const std::string text = render_report(report, format);
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + file.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorKind::IoError, "failed writing " + file.string());
}

ParsedReport parse_report_json(const std::string& text) {
  ParsedReport out;
  try {
    const auto j = ordered_json::parse(text);
    out.curve = j.at("curve").get<std::string>();
    out.p = j.at("p").get<int>();
    out.config = pairs_from_json(j.at("config"));
    out.certification = pairs_from_json(j.at("certification"));
    const auto& g = j.at("gcd");
    if (!g.is_null()) {
      out.mu = g.at("mu").get<int>();
      out.x_exponent = g.at("x").get<int>();
      for (const auto& [n, e] : g.at("phi").items()) out.phi_exponents[std::stoi(n)] = e.get<int>();
      out.residual = g.at("residual").get<std::string>();
    }
    if (!j.at("delta_E").is_null()) out.delta_e = j.at("delta_E").get<int>();
    for (const auto& c : j.at("checks")) {
      out.checks.push_back({c.at("name").get<std::string>(), parse_status(c.at("status").get<std::string>()),
                            c.at("detail").get<std::string>()});
    }
    out.verdict = j.at("verdict").get<std::string>();
  } catch (const ordered_json::exception& ex) {
    throw Error(ErrorKind::ParseError, std::string("report: ") + ex.what());
  }
  return out;
}

}  // namespace iwasawa
