#include "doctest.h"

#include "iwasawa/error.hpp"
#include "iwasawa/mazur_tate.hpp"

#include <random>
#include <set>

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

u64 ipow(u64 b, int e) {
  u64 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

template <class F>
SymbolTable table_from(u32 p, int levels, F value) {
  SymbolTable t("synthetic", p);
  t.set(0, 0, value(0, 0), Rational(0));
  for (int k = 1; k <= levels; ++k) {
    const i64 m = static_cast<i64>(ipow(p, k));
    for (i64 a = 1; a < m; ++a) {
      if (a % p != 0) t.set(k, a, value(k, a), Rational(0));
    }
  }
  return t;
}

// theta_n summed over all units a mod p^{n+1} one at a time, each placed at
// (1+X)^{j(a)} with j(a) from the discrete logarithm.
LambdaElement theta_oracle(const SymbolTable& t, int n, int precision) {
  const u32 p = t.prime();
  const auto ctx = IwasawaContext::omega(p, precision, n);
  const u64 q = ctx->modulus_value();
  LambdaElement sum(ctx);
  const i64 m = static_cast<i64>(ipow(p, n + 1));
  for (i64 a = 1; a < m; ++a) {
    if (a % p == 0) continue;
    const auto d = decompose_unit(a, p, n);
    const auto s = t.at(n + 1, a).plus;
    const auto c = PadicScalar::from_rational(s.numerator(), s.denominator(), p, precision);
    sum = sum + LambdaElement(ctx, poly::scale(poly::one_plus_x_power(d.exponent, q), c.residue(), q));
  }
  return sum;
}

}  // namespace

TEST_CASE("unit decomposition") {
  CHECK(decompose_unit(1, 3, 2).exponent == 0);
  CHECK(decompose_unit(1, 3, 2).teich_index == 0);
  const auto minus_one = decompose_unit(26, 3, 2);
  CHECK(minus_one.teichmuller == 26);
  CHECK(minus_one.exponent == 0);
  const auto seven = decompose_unit(7, 3, 2);
  CHECK(seven.teichmuller == 1);
  CHECK(seven.exponent == 8);
  CHECK(kind_of([] { decompose_unit(9, 3, 2); }) == ErrorKind::NotAUnit);

  // Exhaustive: recombining gives a back, and omega(a) has order dividing p-1.
  for (auto [p, n] : std::vector<std::pair<u32, int>>{{3, 2}, {5, 2}, {7, 1}, {17, 1}, {3, 3}}) {
    const u64 q = ipow(p, n + 1);
    std::set<std::pair<int, u64>> seen;
    for (u64 a = 1; a < q; ++a) {
      if (a % p == 0) continue;
      const auto d = decompose_unit(static_cast<i64>(a), p, n);
      CHECK(modarith::pow(d.teichmuller, p - 1, q) == 1);
      CHECK(modarith::mul(d.teichmuller, modarith::pow(1 + p, d.exponent, q), q) == a);
      CHECK(d.exponent < ipow(p, n));
      seen.insert({d.teich_index, d.exponent});
    }
    CHECK(seen.size() == (p - 1) * ipow(p, n));
  }
}

TEST_CASE("theta from synthetic tables") {
  const auto zero = table_from(5, 3, [](int, i64) { return Rational(0); });
  for (int n = 0; n <= 2; ++n) CHECK(build_theta(zero, n, 6).body.is_zero());

  // Only [1/p^{n+1}] = 1: theta_n = (1+X)^0 = 1.
  const auto single = table_from(5, 3, [](int k, i64 a) { return Rational(k == 3 && a == 1 ? 1 : 0); });
  const auto theta = build_theta(single, 2, 6);
  CHECK(theta.body == LambdaElement::one(theta.body.context_ptr()));
  CHECK(theta.body.length() == 25);

  CHECK(kind_of([&] { build_theta(zero, 3, 6); }) == ErrorKind::IncompleteTable);
  const auto bad = table_from(5, 2, [](int, i64) { return Rational(1, 5); });
  CHECK(kind_of([&] { build_theta(bad, 1, 6); }) == ErrorKind::NotIntegral);
}

TEST_CASE("theta matches the term-by-term oracle and is linear") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 2);
  for (u32 p : {3u, 5u, 7u}) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto t1 = table_from(p, 3, [&](int, i64) { return Rational(num(rng), den(rng)); });
      const auto t2 = table_from(p, 3, [&](int, i64) { return Rational(num(rng), den(rng)); });
      SymbolTable sum("synthetic", p);
      for (const auto& [key, s] : t1.entries()) {
        sum.set(key.first, s.a, s.plus + t2.at(key.first, s.a).plus, Rational(0));
      }
      for (int n = 0; n <= 2; ++n) {
        CAPTURE(p);
        CAPTURE(n);
        const auto a = build_theta(t1, n, 5).body;
        CHECK(a == theta_oracle(t1, n, 5));
        CHECK(build_theta(sum, n, 5).body == a + build_theta(t2, n, 5).body);
      }
    }
  }
}

TEST_CASE("compatibility on a constant table") {
  // [a/m] = c for every cusp satisfies the Hecke relation with a_p = p + 1.
  for (u32 p : {3u, 5u}) {
    const auto t = table_from(p, 4, [](int, i64) { return Rational(3, 2); });
    CHECK(validate_hecke(t, p + 1, 2).passed);
    const auto thetas = build_thetas(t, 3, 6);
    CHECK(check_compat(thetas, 2, p + 1).level == 2);
    CHECK(check_compat(thetas, 3, p + 1).precision == 6);
    CHECK(kind_of([&] { check_compat(thetas, 3, p); }) == ErrorKind::CompatFailed);
  }
}

TEST_CASE("theta elements of rank one curves") {
  struct Case {
    const char* label;
    u32 p;
    int top;
  };
  for (const auto& c : {Case{"53a1", 3, 3}, Case{"53a1", 5, 2}, Case{"37a1", 3, 3}}) {
    CAPTURE(c.label);
    CAPTURE(c.p);
    const auto e = curve(c.label);
    const i64 a_p = a_ell(e, c.p);
    SymbolEngine engine(e, c.p);
    const auto table = engine.table(c.top + 1);
    const auto thetas = build_thetas(table, c.top, 8);
    for (const auto& [n, theta] : thetas) {
      CHECK(theta.body.exact_zero_constant());
      CHECK(theta.body.constant_term().residue() == 0);
    }
    // theta_0 = (a_p - 2)[0/1] vanishes here, so only n = 3 sees the sign
    // of the Phi term; there the opposite sign must fail.
    CHECK(thetas.at(0).body.is_zero());
    for (int n = 2; n <= c.top; ++n) {
      CHECK(check_compat(thetas, n, a_p).level == n);
      if (n == 3) {
        CHECK_FALSE(thetas.at(1).body.is_zero());
        CHECK_FALSE(compat_defect(thetas, n, a_p, +1).is_zero());
      }
    }
  }
}

TEST_CASE("37a1 at p = 17: pi(theta_2) = -Phi_1 theta_0") {
  const auto e = curve("37a1");
  SymbolEngine engine(e, 17);
  const auto thetas = build_thetas(engine.table(3), 2, 6);
  CHECK(a_ell(e, 17) == 0);
  CHECK(check_compat(thetas, 2, 0).level == 2);
  for (const auto& [n, theta] : thetas) CHECK(theta.body.exact_zero_constant());
  CHECK(thetas.at(0).body.is_zero());
  CHECK(weierstrass(thetas.at(1).body).lambda == 1);
}
