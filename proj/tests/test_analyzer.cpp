#include "doctest.h"

#include "iwasawa/analyzer.hpp"
#include "iwasawa/error.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace iwasawa;

namespace {

const std::string data_dir = IWASAWA_DATA_DIR;

CurveData curve(const std::string& label) { return ingest_curve(data_dir + "/curves/" + label + ".json"); }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Usage;
}

LambdaElement element(const ContextPtr& ctx, const std::vector<i64>& coeffs, bool exact_zero = false) {
  return LambdaElement::from_integers(ctx, coeffs, exact_zero);
}

GcdReport synthetic_gcd(const std::string& text) {
  const auto ideal = FactoredIdeal::parse(text);
  GcdReport g;
  g.mu = ideal.mu;
  g.x_exponent = ideal.x_exponent;
  g.phi_exponents = ideal.phi;
  g.certified = true;
  g.certified_digits = 6;
  g.method = "synthetic";
  return g;
}

const Check* find_check(const Verdict& v, const std::string& name) {
  for (const auto& c : v.checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

SignedPair pair_for(const std::string& label, u32 p, int top, int precision) {
  const auto e = curve(label);
  SymbolEngine engine(e, p);
  const auto thetas = build_thetas(engine.table(top + 1), top, precision);
  return extract_signed(thetas, a_ell(e, p));
}

}  // namespace

TEST_CASE("gcd of synthetic elements") {
  const u32 p = 3;
  const auto ctx = IwasawaContext::power_series(p, 6, 12);
  // Phi_1 = X^2 + 3X + 3 times the coprime distinguished X + 3 and X^2 + 3.
  const auto phi1 = phi(ctx, 1);
  const auto f = phi1 * element(ctx, {3, 1});
  const auto g = phi1 * element(ctx, {3, 0, 1}) * element(ctx, {1, 1});
  const auto gcd = gcd_series(f, g);
  CHECK(gcd.to_string() == "Phi_1");
  CHECK(gcd.phi_exponents == std::map<int, int>{{1, 1}});
  CHECK_FALSE(gcd.residual.has_value());
  CHECK_FALSE(gcd.certified);  // Phi presence is only seen modulo p^M
  CHECK(gcd.method == "euclid");

  // X * unit against X * (X + 3) with exact zero constants.
  const auto x_gcd = gcd_series(element(ctx, {0, 1, 1}, true), element(ctx, {0, 3, 1}, true));
  CHECK(x_gcd.to_string() == "X");
  CHECK(x_gcd.certified);

  // Without exact constants, X is seen but not certified.
  CHECK_FALSE(gcd_series(element(ctx, {0, 1, 1}), element(ctx, {0, 3, 1})).certified);

  // A unit is coprime to everything.
  CHECK(gcd_series(element(ctx, {1, 1}), element(ctx, {0, 3, 1})).to_string() == "1");

  // Common p-power: both divisible by 3, one with a unit at X^0 after it.
  const auto pg = gcd_series(element(ctx, {3, 3}), element(ctx, {0, 6, 3}, true));
  CHECK(pg.mu == 1);
  CHECK(pg.to_string() == "p");
}

TEST_CASE("gcd with one series vanishing at this precision") {
  const auto ctx = IwasawaContext::omega_parity(17, 6, 1, 1);
  const auto zero = LambdaElement(ctx).with_exact_zero_constant(true);
  const auto x_unit = element(ctx, {0, 5, 1}, true);
  const auto g = gcd_series(zero, x_unit);
  CHECK(g.to_string() == "X");
  CHECK(g.certified);
  CHECK(g.method == "x-divisibility");
  CHECK(gcd_series(element(ctx, {2, 1}), LambdaElement(ctx)).to_string() == "1");

  // The zero side must have an exactly vanishing constant term.
  CHECK(kind_of([&] { gcd_series(LambdaElement(ctx), x_unit); }) == ErrorKind::PrecisionExhausted);
  CHECK(kind_of([&] { gcd_series(zero, element(ctx, {0, 0, 1}, true)); }) == ErrorKind::PrecisionExhausted);
  CHECK(kind_of([&] { gcd_series(zero, zero); }) == ErrorKind::PrecisionExhausted);
}

TEST_CASE("the gcd divides both inputs") {
  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<i64> coeff(-30, 30);
  for (u32 p : {3u, 5u, 7u}) {
    const auto ctx = IwasawaContext::power_series(p, 6, 16);
    for (int trial = 0; trial < 40; ++trial) {
      auto random = [&](int len) {
        std::vector<i64> c(static_cast<std::size_t>(len));
        for (auto& x : c) x = coeff(rng);
        return element(ctx, c);
      };
      const auto common = random(3);
      const auto f = common * random(4);
      const auto g = common * random(4);
      if (!weierstrass(f).conclusive() || !weierstrass(g).conclusive()) continue;
      GcdReport gcd;
      try {
        gcd = gcd_series(f, g);
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PrecisionExhausted);
        continue;
      }
      CAPTURE(p);
      CAPTURE(trial);
      // Independent check through Lambda division by X^a * Phi... * residual.
      const int digits = gcd.certified_digits;
      REQUIRE(digits >= 1);
      const auto small = IwasawaContext::power_series(p, digits, 16);
      LambdaElement gen = LambdaElement::one(small);
      for (int i = 0; i < gcd.x_exponent; ++i) gen = gen * element(small, {0, 1});
      for (const auto& [n, e] : gcd.phi_exponents) {
        for (int i = 0; i < e; ++i) gen = gen * phi(small, n);
      }
      if (gcd.residual) gen = gen * LambdaElement(small, poly::reduce_coefficients(gcd.residual->residues(), small->modulus_value()));
      for (const auto* x : {&f, &g}) {
        const auto reduced = x->reduce_to(small);
        if (gen.poly_degree() == 0) {
          CHECK(poly::content_valuation(reduced.residues(), p, digits) >= std::min(gcd.mu, digits));
          continue;
        }
        const auto qr = divrem(reduced, gen);
        CHECK(qr.remainder.is_zero());
        CHECK(poly::content_valuation(qr.quotient.residues(), p, digits) >= std::min(gcd.mu, digits));
      }
      // symmetric in its arguments
      CHECK(gcd_series(g, f).to_string() == gcd.to_string());
    }
  }
}

TEST_CASE("comparison with the predicted ideals") {
  const RankSequence e{{1, 0, 0}};
  const auto one = FactoredIdeal::parse("1");

  const auto v = compare_predictions(synthetic_gcd("X"), e, one);
  REQUIRE(find_check(v, "kp"));
  CHECK(find_check(v, "kp")->status == CheckStatus::pass);
  CHECK(find_check(v, "gr")->status == CheckStatus::pass);
  CHECK(find_check(v, "xgcd")->status == CheckStatus::pass);
  CHECK(v.delta_e == 1);
  CHECK(v.overall() == CheckStatus::pass);

  const auto squared = compare_predictions(synthetic_gcd("X^2"), e, one);
  CHECK(find_check(squared, "kp")->status == CheckStatus::fail);
  CHECK(squared.overall() == CheckStatus::fail);

  const auto delta0 = compare_predictions(synthetic_gcd("X"), e, FactoredIdeal::parse("X"));
  CHECK(find_check(delta0, "xgcd")->status == CheckStatus::pass);
  CHECK(delta0.delta_e == 0);
  CHECK(find_check(delta0, "gr")->status == CheckStatus::fail);

  auto loose = synthetic_gcd("X");
  loose.certified = false;
  const auto inc = compare_predictions(loose, e, one);
  CHECK(find_check(inc, "kp")->status == CheckStatus::inconclusive);
  CHECK(find_check(inc, "xgcd")->status == CheckStatus::inconclusive);
  CHECK_FALSE(inc.delta_e.has_value());
  CHECK(inc.overall() == CheckStatus::inconclusive);
}

TEST_CASE("predicted ideals fix delta_E on generated rank sequences") {
  std::mt19937_64 rng(8080);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_int_distribution<int> len(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    RankSequence e;
    e.e.resize(static_cast<std::size_t>(len(rng)));
    for (auto& x : e.e) x = bit(rng);
    GcdReport gcd;
    const auto kp = kp_ideal(e);
    gcd.mu = kp.mu;
    gcd.x_exponent = kp.x_exponent;
    gcd.phi_exponents = kp.phi;
    gcd.certified = true;
    const auto v = compare_predictions(gcd, e, gr_ideal(e));
    REQUIRE(v.delta_e.has_value());
    CHECK((*v.delta_e == 1) == (e.at(0) >= 1));
    CHECK(v.overall() == CheckStatus::pass);
  }
}

TEST_CASE("consistency of gcd and fine characteristic ideal") {
  const auto one = FactoredIdeal::parse("1");
  const auto vacuous = theorem_consistency(synthetic_gcd("X"), one);
  REQUIRE(vacuous.checks.size() == 1);
  CHECK(vacuous.overall() == CheckStatus::pass);

  const auto phi = theorem_consistency(synthetic_gcd("X*Phi_1"), one);
  CHECK(phi.overall() == CheckStatus::fail);
  REQUIRE(phi.checks.size() == 1);
  CHECK(phi.checks[0].detail.find("Phi_1") != std::string::npos);

  const auto mu = theorem_consistency(synthetic_gcd("p*X"), one);
  CHECK(mu.overall() == CheckStatus::fail);
  CHECK(mu.checks[0].name.find("p") != std::string::npos);

  // Converse direction and agreement.
  CHECK(theorem_consistency(synthetic_gcd("X"), FactoredIdeal::parse("Phi_2")).overall() == CheckStatus::fail);
  CHECK(theorem_consistency(synthetic_gcd("X*Phi_2"), FactoredIdeal::parse("Phi_2")).overall() == CheckStatus::pass);
  // Powers of X never matter.
  CHECK(theorem_consistency(synthetic_gcd("X^3"), FactoredIdeal::parse("X")).overall() == CheckStatus::pass);

  auto loose = synthetic_gcd("X*Phi_1");
  loose.certified = false;
  CHECK(theorem_consistency(loose, one).overall() == CheckStatus::inconclusive);
}

TEST_CASE("report serialization") {
  Report empty;
  const auto text = render_report(empty, ReportFormat::json);
  const auto j = nlohmann::json::parse(text);
  CHECK(j["checks"].empty());
  CHECK(j["gcd"].is_null());
  CHECK(j["delta_E"].is_null());
  CHECK(render_report(empty, ReportFormat::csv) == "name,status,detail\n");

  Report r;
  r.curve = "37a1";
  r.p = 17;
  r.config = {{"level", "1"}, {"prec", "6"}};
  r.certification = {{"symbols", "exact"}, {"extract", "6 digits"}};
  r.gcd = synthetic_gcd("X*Phi_1^2");
  const auto one = FactoredIdeal::parse("1");
  r.verdicts.push_back(compare_predictions(*r.gcd, RankSequence{{1}}, one));
  r.verdicts.push_back(theorem_consistency(*r.gcd, one));

  const auto json_text = render_report(r, ReportFormat::json);
  CHECK(render_report(r, ReportFormat::json) == json_text);  // deterministic
  const auto parsed = parse_report_json(json_text);
  CHECK(parsed.curve == "37a1");
  CHECK(parsed.p == 17);
  CHECK(parsed.config == r.config);
  CHECK(parsed.certification == r.certification);
  CHECK(parsed.x_exponent == 1);
  CHECK(parsed.phi_exponents == std::map<int, int>{{1, 2}});
  CHECK(parsed.residual == "1");
  CHECK(parsed.verdict == "FAIL");
  std::size_t total = 0;
  for (const auto& v : r.verdicts) total += v.checks.size();
  CHECK(parsed.checks.size() == total);
  CHECK(parse_report_json(json_text) == parsed);

  // Key order is fixed.
  const auto keys = nlohmann::ordered_json::parse(json_text);
  std::vector<std::string> order;
  for (const auto& [k, v] : keys.items()) order.push_back(k);
  CHECK(order == std::vector<std::string>{"curve", "p", "config", "certification", "gcd", "delta_E", "checks", "verdict"});

  const auto csv = render_report(r, ReportFormat::csv);
  std::istringstream lines(csv);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == total + 1);
  CHECK(csv.find("\"gcd X*Phi_1^2, predicted X\"") != std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "iwasawa_report_test";
  std::filesystem::create_directories(dir);
  emit_report(r, ReportFormat::json, dir / "r.json");
  std::ifstream in(dir / "r.json");
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == json_text);
  CHECK(kind_of([&] { emit_report(r, ReportFormat::json, dir / "missing" / "r.json"); }) == ErrorKind::IoError);
  CHECK(kind_of([] { parse_report_json("{}"); }) == ErrorKind::ParseError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("gcd of the signed pairs of rank one curves") {
  struct Case {
    const char* label;
    u32 p;
    int top;
  };
  for (const auto& c : {Case{"53a1", 5, 2}, Case{"53a1", 3, 3}, Case{"37a1", 3, 3}}) {
    CAPTURE(c.label);
    CAPTURE(c.p);
    const auto pair = pair_for(c.label, c.p, c.top, 8);
    const auto gcd = gcd_signed_pair(pair);
    CHECK(gcd.to_string() == "X");
    CHECK(gcd.certified);
    const auto e = curve(c.label).e_sequence;
    const auto one = FactoredIdeal::parse("1");
    const auto v = compare_predictions(gcd, e, one);
    CHECK(v.overall() == CheckStatus::pass);
    CHECK(v.delta_e == 1);
    CHECK(theorem_consistency(gcd, one).overall() == CheckStatus::pass);

    // Swapping the labels changes nothing.
    SignedPair swapped = pair;
    std::swap(swapped.series[0], swapped.series[1]);
    CHECK(gcd_signed_pair(swapped).to_string() == "X");
  }
}

TEST_CASE("37a1 at p = 17: gcd of the plus/minus pair is X") {
  for (int top : {1, 2}) {
    CAPTURE(top);
    const auto pair = pair_for("37a1", 17, top, 6);
    const auto gcd = gcd_signed_pair(pair);
    CHECK(gcd.to_string() == "X");
    CHECK(gcd.certified);
    CHECK(gcd.method == (top == 1 ? "x-divisibility" : "euclid"));
  }
}
