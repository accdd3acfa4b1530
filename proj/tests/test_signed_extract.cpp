#include "doctest.h"

#include "iwasawa/error.hpp"
#include "iwasawa/signed_extract.hpp"

#include <algorithm>
#include <random>

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

// theta_n = sign_n * (parity product) * F mod omega_n, sign_n = (-1)^{n/2}.
ThetaFamily manufactured_pm(u32 p, int top, int precision, const std::vector<i64>& f, int mu_drift = 0) {
  ThetaFamily out;
  for (int n = 0; n <= top; ++n) {
    const auto ctx = IwasawaContext::omega(p, precision, n);
    const u64 q = ctx->modulus_value();
    poly::Poly body = poly::mul(poly::phi_parity_product(p, n - 1, (n - 1 + 2) % 2, q), poly::from_signed(f, q), q);
    if ((n / 2) % 2 == 1) body = poly::sub(poly::Poly{0}, body, q);
    if (mu_drift != 0 && n % 2 == 0) body = poly::scale(body, modarith::prime_power(p, n / 2 * mu_drift), q);
    out.emplace(n, ThetaElement{n, LambdaElement(ctx, std::move(body)), "synthetic"});
  }
  return out;
}

std::vector<int> lambda_multiset(const SignedPair& pair) {
  std::vector<int> out;
  for (const auto& s : pair.series) {
    if (s.invariants.lambda) out.push_back(*s.invariants.lambda);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Re-multiplying each plus/minus series by its parity product and sign gives
// theta back at the level it was read from.
void check_remultiplication(const SignedPair& pair, const ThetaFamily& thetas) {
  for (const auto& s : pair.series) {
    const auto& theta = thetas.at(s.level).body;
    const auto ctx = s.series.context_ptr();
    const u64 q = ctx->modulus_value();
    const auto lift = IwasawaContext::omega(ctx->prime(), ctx->precision(), s.level);
    poly::Poly back = poly::mul(poly::phi_parity_product(ctx->prime(), s.level - 1, (s.level + 1) % 2, q), s.series.residues(), q);
    if ((s.level / 2) % 2 == 1) back = poly::sub(poly::Poly{0}, back, q);
    CHECK(LambdaElement(lift, back) == theta.reduce_to(lift));
  }
}

// Rebuilds theta_k = A u_k + B v_k mod omega_k from a sharp/flat pair.
LambdaElement recombine(const SignedPair& pair, i64 a_p, int k, int precision) {
  const auto& a = pair.series[0].series;
  const auto& b = pair.series[1].series;
  const u32 p = a.context().prime();
  const auto ctx = IwasawaContext::omega(p, precision, k);
  const u64 q = ctx->modulus_value();
  poly::Poly u_prev{1}, u{0}, v_prev{0}, v{1};
  if (k == 0) {
    u = u_prev;
    v = v_prev;
  }
  for (int j = 1; j < k; ++j) {
    const auto phij = poly::cyclotomic(p, j, q);
    const u64 ap = modarith::reduce(a_p, q);
    auto un = poly::sub(poly::scale(u, ap, q), poly::mul(phij, u_prev, q), q);
    auto vn = poly::sub(poly::scale(v, ap, q), poly::mul(phij, v_prev, q), q);
    u_prev = std::exchange(u, un);
    v_prev = std::exchange(v, vn);
  }
  const auto ar = poly::reduce_coefficients(a.residues(), q);
  const auto br = poly::reduce_coefficients(b.residues(), q);
  return LambdaElement(ctx, poly::add(poly::mul(ar, u, q), poly::mul(br, v, q), q));
}

}  // namespace

TEST_CASE("parity product degrees") {
  CHECK(parity_product_degree(3, 0) == 0);
  CHECK(parity_product_degree(3, 1) == 0);
  CHECK(parity_product_degree(3, 2) == 2);
  CHECK(parity_product_degree(3, 3) == 6);
  CHECK(parity_product_degree(3, 4) == 18 + 2);
  CHECK(parity_product_degree(17, 2) == 16);
}

TEST_CASE("invariant fit on manufactured thetas") {
  // F = 2X + 3X^2 + X^3 over p = 3: mu = 0, lambda = 1. theta_0 = F(0) = 0
  // carries no information and is skipped.
  const std::vector<i64> f{0, 2, 3, 1};
  const auto thetas = manufactured_pm(3, 4, 6, f);
  const auto fits = invariant_fit(thetas);
  REQUIRE(fits.size() == 2);
  for (const auto& fit : fits) {
    CHECK(fit.mu == 0);
    CHECK(fit.lambda == 1);
  }
  CHECK(fits[0].levels == std::vector<int>{2, 4});
  CHECK(fits[1].levels == std::vector<int>{1, 3});

  // p * F has mu = 1.
  const auto scaled = manufactured_pm(5, 2, 6, {5, 10, 5});
  for (const auto& fit : invariant_fit(scaled)) {
    CHECK(fit.mu == 1);
    CHECK(fit.lambda == 0);
  }

  CHECK(kind_of([] { invariant_fit(manufactured_pm(3, 4, 6, {1, 1}, 1)); }) == ErrorKind::NotStabilized);
  CHECK(kind_of([] { invariant_fit(manufactured_pm(3, 3, 6, {0})); }) == ErrorKind::NotStabilized);
}

TEST_CASE("plus/minus extraction recovers the manufactured series") {
  std::mt19937_64 rng(77031);
  std::uniform_int_distribution<i64> coeff(-40, 40);
  for (u32 p : {3u, 5u}) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<i64> f(6);
      for (auto& c : f) c = coeff(rng);
      f[0] = 0;
      f[1] = 1;  // lambda = 1, visible from level 1 on
      CAPTURE(p);
      CAPTURE(trial);
      const int top = p == 3 ? 4 : 3;
      const auto thetas = manufactured_pm(p, top, 6, f);
      const auto pair = extract_plus_minus(thetas, 0);
      CHECK(pair.kind == SignedKind::plus_minus);
      CHECK(pair.series[0].label == "+");
      CHECK(pair.series[1].label == "-");
      CHECK(pair.stabilized);
      for (const auto& s : pair.series) {
        const auto expect = LambdaElement::from_integers(s.series.context_ptr(), f);
        CHECK(s.series == expect);
      }
      check_remultiplication(pair, thetas);
      CHECK(pair.fit_agrees == true);
    }
  }
}

TEST_CASE("plus/minus extraction failures") {
  CHECK(kind_of([] { extract_plus_minus(manufactured_pm(3, 3, 6, {0}), 0); }) == ErrorKind::NotStabilized);
  CHECK(kind_of([] { extract_plus_minus(manufactured_pm(3, 3, 6, {0, 1}), 2); }) == ErrorKind::WrongReductionType);
  CHECK(kind_of([] { extract_signed(manufactured_pm(5, 2, 6, {0, 1}), 2); }) == ErrorKind::WrongReductionType);

  // theta_3 off by a unit constant is no longer divisible by Phi_2.
  auto broken = manufactured_pm(3, 3, 6, {0, 1});
  auto& t3 = broken.at(3).body;
  t3 = t3 + LambdaElement::one(t3.context_ptr());
  CHECK(kind_of([&] { extract_plus_minus(broken, 0); }) == ErrorKind::CompatFailed);
}

TEST_CASE("sharp/flat extraction solves the recurrence system") {
  std::mt19937_64 rng(5150);
  std::uniform_int_distribution<i64> coeff(-20, 20);
  const u32 p = 3;
  const int precision = 8;
  for (i64 a_p : {3, -3, 6}) {
    for (int top : {1, 2, 3}) {
      CAPTURE(a_p);
      CAPTURE(top);
      const auto ctx_a = IwasawaContext::omega_parity(p, precision, top, 0);
      const auto ctx_b = IwasawaContext::omega_parity(p, precision, top, 1);
      std::vector<i64> ac(static_cast<std::size_t>(ctx_a->degree())), bc(static_cast<std::size_t>(ctx_b->degree()));
      for (auto& c : ac) c = coeff(rng);
      for (auto& c : bc) c = coeff(rng);
      ac[1 % ac.size()] = 1;
      bc[1] = 1;
      SignedPair truth;
      truth.series.push_back(SignedSeries{"sharp", top, LambdaElement::from_integers(ctx_a, ac), {}});
      truth.series.push_back(SignedSeries{"flat", top, LambdaElement::from_integers(ctx_b, bc), {}});
      ThetaFamily thetas;
      for (int k = 0; k <= top; ++k) thetas.emplace(k, ThetaElement{k, recombine(truth, a_p, k, precision), "synthetic"});

      const auto pair = extract_sharp_flat(thetas, a_p);
      CHECK(pair.kind == SignedKind::sharp_flat);
      CHECK(pair.method == ExtractionMethod::linear_system);
      const int digits = pair.series[0].series.context().precision();
      CHECK(digits >= 1);
      CHECK(digits <= precision);
      for (int i = 0; i < 2; ++i) {
        const auto& got = pair.series[static_cast<std::size_t>(i)].series;
        CHECK(got == truth.series[static_cast<std::size_t>(i)].series.reduce_to(got.context_ptr()));
      }
      for (int k : {top, top - 1}) {
        const auto back = recombine(pair, a_p, k, digits);
        CHECK(back == thetas.at(k).body.reduce_to(back.context_ptr()));
      }
    }
  }
  CHECK(kind_of([] { extract_sharp_flat(manufactured_pm(5, 2, 6, {0, 1}), 0); }) == ErrorKind::WrongReductionType);
  CHECK(kind_of([] { extract_sharp_flat(manufactured_pm(5, 2, 6, {0, 1}), 2); }) == ErrorKind::WrongReductionType);
}

TEST_CASE("53a1 at p = 5: both plus/minus series are X times a unit") {
  const auto e = curve("53a1");
  REQUIRE(a_ell(e, 5) == 0);
  SymbolEngine engine(e, 5);
  const auto thetas = build_thetas(engine.table(3), 2, 8);
  const auto pair = extract_signed(thetas, 0);
  CHECK(pair.kind == SignedKind::plus_minus);
  CHECK(pair.stabilized);
  for (const auto& s : pair.series) {
    CHECK(s.invariants.mu == 0);
    CHECK(s.invariants.lambda == 1);
    CHECK(s.series.exact_zero_constant());
  }
  check_remultiplication(pair, thetas);
  const auto fits = invariant_fit(thetas);
  for (const auto& fit : fits) {
    if (!fit.conclusive()) continue;
    CHECK(fit.mu == 0);
    CHECK(fit.lambda == 1);
  }
  CHECK(pair.fit_agrees == true);
}

TEST_CASE("rank one curves at p = 3: sharp/flat series") {
  for (const char* label : {"53a1", "37a1"}) {
    CAPTURE(label);
    const auto e = curve(label);
    const i64 a_p = a_ell(e, 3);
    REQUIRE(a_p % 3 == 0);
    REQUIRE(a_p != 0);
    SymbolEngine engine(e, 3);
    const auto thetas = build_thetas(engine.table(4), 3, 8);
    const auto pair = extract_signed(thetas, a_p);
    CHECK(pair.kind == SignedKind::sharp_flat);
    CHECK(pair.series[0].label == "sharp");
    CHECK(pair.series[1].label == "flat");
    const auto lambdas = lambda_multiset(pair);
    CHECK(std::find(lambdas.begin(), lambdas.end(), 1) != lambdas.end());
    for (const auto& s : pair.series) {
      CHECK(s.invariants.mu == 0);
      CHECK(s.series.exact_zero_constant());
      CHECK(s.series.constant_term().residue() == 0);
    }
    if (std::string(label) == "53a1") CHECK(lambdas == std::vector<int>{1, 1});
    if (pair.fit_agrees) CHECK(*pair.fit_agrees);
  }
}

TEST_CASE("37a1 at p = 17: one plus/minus series has lambda 1") {
  const auto e = curve("37a1");
  SymbolEngine engine(e, 17);
  const auto thetas = build_thetas(engine.table(3), 2, 6);
  const auto pair = extract_signed(thetas, 0);
  for (const auto& s : pair.series) {
    if (s.invariants.mu) CHECK(*s.invariants.mu == 0);
  }
  const auto lambdas = lambda_multiset(pair);
  CHECK(std::find(lambdas.begin(), lambdas.end(), 1) != lambdas.end());
  const auto minus = std::find_if(pair.series.begin(), pair.series.end(), [](const auto& s) { return s.label == "-"; });
  REQUIRE(minus != pair.series.end());
  CHECK(minus->invariants.lambda == 1);
  CHECK(minus->series.exact_zero_constant());
}

TEST_CASE("ordinary prime is rejected") {
  const auto e = curve("37a1");
  const i64 a5 = a_ell(e, 5);
  REQUIRE(a5 % 5 != 0);
  SymbolEngine engine(e, 5);
  const auto thetas = build_thetas(engine.table(2), 1, 6);
  CHECK(kind_of([&] { extract_signed(thetas, a5); }) == ErrorKind::WrongReductionType);
}
