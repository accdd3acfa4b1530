#include "doctest.h"

#include "iwasawa/error.hpp"
#include "iwasawa/lambda_ring.hpp"

#include <random>

using namespace iwasawa;

namespace {

std::vector<i64> centered(const LambdaElement& f) {
  std::vector<i64> out;
  for (u64 r : f.residues()) {
    out.push_back(static_cast<i64>(modarith::centered(r, f.context().modulus_value())));
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Usage;
}

// Element with prescribed invariants: p^mu * (non-unit low part + unit at
// index lambda + arbitrary tail).
LambdaElement random_with_invariants(const ContextPtr& ctx, int mu, int lambda, int extra,
                                     std::mt19937_64& rng) {
  const u32 p = ctx->prime();
  const u64 q = ctx->modulus_value();
  u64 pmu = 1;
  for (int i = 0; i < mu; ++i) pmu *= p;
  poly::Poly c(static_cast<std::size_t>(lambda + extra + 1), 0);
  for (int i = 0; i < lambda; ++i) c[static_cast<std::size_t>(i)] = (rng() % q) * p % q;
  c[static_cast<std::size_t>(lambda)] = 1 + rng() % (p - 1) + p * (rng() % 50);
  for (int i = lambda + 1; i <= lambda + extra; ++i) c[static_cast<std::size_t>(i)] = rng() % q;
  for (auto& x : c) x = modarith::mul(x, pmu, q);
  return LambdaElement(ctx, c);
}

}  // namespace

TEST_CASE("cyclotomic factors") {
  auto ctx3 = IwasawaContext::power_series(3, 6, 40);
  CHECK(centered(phi(ctx3, 1)) == std::vector<i64>{3, 3, 1});
  CHECK(centered(phi(ctx3, 0)) == std::vector<i64>{0, 1});
  auto ctx5 = IwasawaContext::power_series(5, 6, 40);
  CHECK(centered(phi(ctx5, 1)) == std::vector<i64>{5, 10, 10, 5, 1});
  CHECK(kind_of([&] { phi(IwasawaContext::power_series(5, 6, 4), 1); }) ==
        ErrorKind::TruncationTooSmall);
}

TEST_CASE("Phi_n constant term and degree for n <= 3") {
  for (u32 p : {3u, 5u, 7u}) {
    const int D = static_cast<int>(p * p * p) + 2;
    auto ctx = IwasawaContext::power_series(p, 4, D);
    for (int n = 1; n <= 3; ++n) {
      const auto f = phi(ctx, n);
      CHECK(f.residue(0) == p);
      CHECK(f.poly_degree() == static_cast<int>(phi_degree(p, n)));
      u64 expected = p - 1;
      for (int i = 1; i < n; ++i) expected *= p;
      CHECK(phi_degree(p, n) == expected);
      // Phi_n(X) is congruent to X^{deg} mod p.
      for (int i = 0; i < f.poly_degree(); ++i) CHECK(f.residue(i) % p == 0);
    }
  }
}

TEST_CASE("omega and the parity identity") {
  for (u32 p : {3u, 5u}) {
    auto ctx = IwasawaContext::power_series(p, 5, static_cast<int>(p * p) + 3);
    CHECK(centered(omega(ctx, 0)) == std::vector<i64>{0, 1});
    CHECK(omega(ctx, 1) == phi(ctx, 0) * phi(ctx, 1));
    const auto lhs = omega_signed(ctx, 2, 0) * omega_signed(ctx, 2, 1);
    const auto rhs = phi(ctx, 0) * omega(ctx, 2);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("divrem examples") {
  auto ctx = IwasawaContext::power_series(3, 6, 12);
  const auto x = phi(ctx, 0);
  const auto p1 = phi(ctx, 1);
  auto r = divrem(x * p1, x);
  CHECK(r.quotient == p1);
  CHECK(r.remainder.is_zero());
  r = divrem(p1, x);
  CHECK(centered(r.quotient) == std::vector<i64>{3, 1});
  CHECK(centered(r.remainder) == std::vector<i64>{3});
  r = divrem(p1, p1);
  CHECK(centered(r.quotient) == std::vector<i64>{1});
  CHECK(r.remainder.is_zero());
  CHECK(kind_of([&] { divrem(p1, LambdaElement::from_integers(ctx, {1, 1})); }) ==
        ErrorKind::NotDistinguished);
}

TEST_CASE("divrem identity on random inputs") {
  std::mt19937_64 rng(99);
  auto ctx = IwasawaContext::omega(5, 6, 2);
  for (int trial = 0; trial < 50; ++trial) {
    poly::Poly c(25);
    for (auto& v : c) v = rng() % ctx->modulus_value();
    const LambdaElement f(ctx, c);
    const auto d = phi(ctx, 1);
    const auto r = divrem(f, d);
    CHECK(r.quotient * d + r.remainder == f);
    CHECK(r.remainder.poly_degree() < d.poly_degree());
    // Phi_1 divides omega_2, so the remainder is independent of the representative.
    CHECK(r.certified_digits == 6);
  }
}

TEST_CASE("weierstrass examples") {
  auto ctx = IwasawaContext::power_series(3, 6, 8);
  auto r = weierstrass(LambdaElement::from_integers(ctx, {3, 3}));
  CHECK(r.mu == 1);
  CHECK(r.lambda == 0);
  r = weierstrass(LambdaElement::from_integers(ctx, {-3, 0, 1}));
  CHECK(r.mu == 0);
  CHECK(r.lambda == 2);
  CHECK(centered(*r.distinguished_part) == std::vector<i64>{-3, 0, 1});
  r = weierstrass(LambdaElement::from_integers(ctx, {729, 729 * 2}));
  CHECK_FALSE(r.conclusive());
  r = weierstrass(LambdaElement(ctx));
  CHECK_FALSE(r.conclusive());
}

TEST_CASE("weierstrass re-multiplication round trip") {
  std::mt19937_64 rng(1234);
  for (u32 p : {3u, 5u, 17u}) {
    auto ctx = IwasawaContext::power_series(p, 8, 20);
    for (int trial = 0; trial < 40; ++trial) {
      const int mu = static_cast<int>(rng() % 3);
      const int lambda = static_cast<int>(rng() % 6);
      const auto f = random_with_invariants(ctx, mu, lambda, 10, rng);
      const auto rep = weierstrass(f);
      REQUIRE(rep.conclusive());
      CHECK(*rep.mu == mu);
      CHECK(*rep.lambda == lambda);
      // Recombine in the distinguished part's precision.
      const int digits = 8 - mu;
      auto small = IwasawaContext::power_series(p, digits, 20);
      const LambdaElement P(small, rep.distinguished_part->residues());
      const LambdaElement U(small, rep.unit_part->residues());
      poly::Poly g(f.residues());
      u64 pmu = 1;
      for (int i = 0; i < mu; ++i) pmu *= p;
      for (auto& v : g) v /= pmu;
      CHECK(P * U == LambdaElement(small, g));
      // P is distinguished.
      CHECK(P.poly_degree() == lambda);
      CHECK(P.residue(lambda) == 1);
      for (int i = 0; i < lambda; ++i) CHECK(P.residue(i) % p == 0);
    }
  }
}

TEST_CASE("mu and lambda are additive on 500 random pairs") {
  std::mt19937_64 rng(500);
  const u32 primes[] = {3, 5, 7, 17};
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const u32 p = primes[trial % 4];
    auto ctx = IwasawaContext::power_series(p, 10, 24);
    const int mf = static_cast<int>(rng() % 3), mg = static_cast<int>(rng() % 3);
    const int lf = static_cast<int>(rng() % 7), lg = static_cast<int>(rng() % 7);
    const auto f = random_with_invariants(ctx, mf, lf, 8, rng);
    const auto g = random_with_invariants(ctx, mg, lg, 8, rng);
    const auto rf = weierstrass(f), rg = weierstrass(g), rfg = weierstrass(f * g);
    REQUIRE(rf.conclusive());
    REQUIRE(rg.conclusive());
    REQUIRE(rfg.conclusive());
    CHECK(*rfg.mu == *rf.mu + *rg.mu);
    CHECK(*rfg.lambda == *rf.lambda + *rg.lambda);
    ++checked;
  }
  CHECK(checked == 500);
}

TEST_CASE("gcd examples") {
  auto ctx = IwasawaContext::power_series(3, 8, 30);
  const auto x = phi(ctx, 0).with_exact_zero_constant(true);
  auto g = gcd_lambda(x.scaled(3), x * x);
  CHECK(g.mu == 0);
  CHECK(g.mu_certified);
  CHECK(g.x_exponent == 1);
  CHECK(g.to_string() == "X");
  CHECK(g.certified());

  g = gcd_lambda(x * phi(ctx, 1), x * phi(ctx, 2));
  CHECK(g.to_string() == "X");
  CHECK(g.certified());

  g = gcd_lambda(phi(ctx, 1), phi(ctx, 2));
  CHECK(g.to_string() == "1");
  CHECK(g.certified());
}

TEST_CASE("gcd detects shared cyclotomic and residual factors") {
  auto ctx = IwasawaContext::power_series(3, 10, 30);
  const auto f = LambdaElement::from_integers(ctx, {1, 1});   // unit
  const auto h = LambdaElement::from_integers(ctx, {3, 1});   // X + 3
  const auto k = LambdaElement::from_integers(ctx, {-6, 1});  // X - 6
  auto g = gcd_lambda(phi(ctx, 1) * f * h, phi(ctx, 1) * k);
  CHECK(g.phi_exponents == std::map<int, int>{{1, 1}});
  CHECK_FALSE(g.residual.has_value());
  CHECK(g.to_string() == "Phi_1");
  CHECK_FALSE(g.certified());

  const auto e = LambdaElement::from_integers(ctx, {-3, 0, 1});  // Eisenstein X^2 - 3
  g = gcd_lambda(e * h, e * k);
  REQUIRE(g.residual.has_value());
  CHECK(centered(*g.residual) == std::vector<i64>{-3, 0, 1});
  CHECK(g.certified_digits == 8);  // (X+3) - (X-6) = 9 costs two digits

  // X^2 + 3 and X^2 - 3 are coprime; Euclid must prove it.
  g = gcd_lambda(e, LambdaElement::from_integers(ctx, {3, 0, 1}));
  CHECK(g.to_string() == "1");
  CHECK(g.certified());
}

TEST_CASE("gcd is symmetric and divides both inputs") {
  std::mt19937_64 rng(77);
  auto ctx = IwasawaContext::power_series(5, 10, 30);
  for (int trial = 0; trial < 60; ++trial) {
    const auto common = random_with_invariants(ctx, 0, static_cast<int>(rng() % 3), 0, rng);
    const auto f = common * random_with_invariants(ctx, 0, static_cast<int>(rng() % 3), 4, rng);
    const auto g = common * random_with_invariants(ctx, 0, static_cast<int>(rng() % 3), 4, rng);
    const auto a = gcd_lambda(f, g), b = gcd_lambda(g, f);
    CHECK(a.to_string() == b.to_string());
    CHECK(a.mu == 0);
    // Rebuild the generator and check it divides both inputs.
    auto gen = LambdaElement::one(ctx);
    for (int i = 0; i < a.x_exponent; ++i) gen = gen * phi(ctx, 0);
    for (const auto& [n, e] : a.phi_exponents) {
      for (int i = 0; i < e; ++i) gen = gen * phi(ctx, n);
    }
    if (a.residual) {
      const int digits = a.certified_digits;
      auto small = IwasawaContext::power_series(5, digits, 30);
      auto lifted = LambdaElement(ctx, a.residual->residues());
      gen = gen * lifted;
      const auto gen_small = gen.reduce_to(small);
      CHECK(divrem(f.reduce_to(small), gen_small).remainder.is_zero());
      CHECK(divrem(g.reduce_to(small), gen_small).remainder.is_zero());
    } else if (gen.poly_degree() >= 1) {
      CHECK(divrem(f, gen).remainder.is_zero());
      CHECK(divrem(g, gen).remainder.is_zero());
    }
  }
}

TEST_CASE("reductions only go to coarser quotients") {
  auto w2 = IwasawaContext::omega(3, 6, 2);
  auto w1 = IwasawaContext::omega(3, 5, 1);
  const auto f = LambdaElement::from_integers(w2, {0, 1, 2, 3, 4, 5, 6, 7, 8}, false);
  const auto g = f.reduce_to(w1);
  CHECK(g.length() == 3);
  CHECK(kind_of([&] { (void)g.reduce_to(w2); }) == ErrorKind::MixedContext);
  CHECK(kind_of([&] { (void)f.reduce_to(IwasawaContext::power_series(3, 5, 2)); }) ==
        ErrorKind::MixedContext);
  CHECK(kind_of([&] { (void)(f + LambdaElement(w1)); }) == ErrorKind::MixedContext);
  // omega_2^even divides omega_2, so this reduction is allowed.
  CHECK(f.reduce_to(IwasawaContext::omega_parity(3, 6, 2, 0)).length() == 7);
}
