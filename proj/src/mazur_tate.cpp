#include "iwasawa/mazur_tate.hpp"
#include "iwasawa/error.hpp"

#include <numeric>

namespace iwasawa {

namespace {

u64 least_primitive_root(u32 p) {
  for (u64 g = 2; g < p; ++g) {
    bool primitive = true;
    for (u64 q = 2, rest = p - 1; q <= rest; ++q) {
      if (rest % q != 0) continue;
      if (modarith::pow(g, (p - 1) / q, p) == 1) primitive = false;
      while (rest % q == 0) rest /= q;
    }
    if (primitive) return g;
  }
  return 1;  // p = 2 never reaches here: prime_power rejects it first
}

// The (p-1)-th roots of unity mod p^{n+1}, listed as omega(g)^i.
std::vector<u64> teichmuller_values(u32 p, int n) {
  const u64 q = modarith::prime_power(p, n + 1);
  const u64 pn = modarith::prime_power(p, n);
  const u64 t = modarith::pow(least_primitive_root(p), pn, q);
  std::vector<u64> values(p - 1);
  u64 v = 1;
  for (auto& x : values) {
    x = v;
    v = modarith::mul(v, t, q);
  }
  return values;
}

}  // namespace

UnitDecomposition decompose_unit(i64 a, u32 p, int n) {
  const u64 q = modarith::prime_power(p, n + 1);
  const u64 x = modarith::reduce(a, q);
  if (x % p == 0) throw Error(ErrorKind::NotAUnit, std::to_string(a) + " is divisible by " + std::to_string(p));
  UnitDecomposition out;
  const u64 pn = modarith::prime_power(p, n);
  out.teichmuller = modarith::pow(x, pn, q);
  const auto teich = teichmuller_values(p, n);
  for (std::size_t i = 0; i < teich.size(); ++i) {
    if (teich[i] == out.teichmuller) out.teich_index = static_cast<int>(i);
  }
  // x / omega(x) lies in 1 + pZ_p; find j with gamma^j equal to it.
  const u64 target = modarith::mul(x, *modarith::inverse(out.teichmuller, q), q);
  u64 g = 1;
  for (u64 j = 0; j < pn; ++j) {
    if (g == target) {
      out.exponent = j;
      return out;
    }
    g = modarith::mul(g, 1 + p, q);
  }
  throw Error(ErrorKind::NonConvergence, "discrete logarithm base 1+p not found");
}

ThetaElement build_theta(const SymbolTable& table, int n, int precision) {
  if (n < 0) throw Error(ErrorKind::Usage, "negative level");
  if (!table.complete_through(n + 1)) {
    throw Error(ErrorKind::IncompleteTable, "theta_" + std::to_string(n) + " needs symbols through level " +
                                                std::to_string(n + 1));
  }
  const u32 p = table.prime();
  const auto ctx = IwasawaContext::omega(p, precision, n);
  const u64 q = ctx->modulus_value();
  const u64 level_mod = modarith::prime_power(p, n + 1);
  const u64 pn = modarith::prime_power(p, n);
  const auto teich = teichmuller_values(p, n);

  // c_j as exact rationals first, so the constant term theta_n(0) = sum c_j
  // is known exactly.
  std::vector<Rational> c(pn);
  Rational total(0);
  u64 gj = 1;
  for (u64 j = 0; j < pn; ++j) {
    for (u64 t : teich) {
      c[j] += table.at(n + 1, static_cast<i64>(modarith::mul(t, gj, level_mod))).plus;
    }
    total += c[j];
    gj = modarith::mul(gj, 1 + p, level_mod);
  }

  // Horner in (1+X): sum_j c_j (1+X)^j.
  poly::Poly body{0};
  for (u64 j = pn; j-- > 0;) {
    poly::Poly shifted(body.size() + 1, 0);
    for (std::size_t i = 0; i < body.size(); ++i) {
      shifted[i] = modarith::add(shifted[i], body[i], q);
      shifted[i + 1] = modarith::add(shifted[i + 1], body[i], q);
    }
    const auto cj = PadicScalar::from_rational(c[j].numerator(), c[j].denominator(), p, precision);
    shifted[0] = modarith::add(shifted[0], cj.residue(), q);
    body = std::move(shifted);
  }
  return ThetaElement{n, LambdaElement(ctx, std::move(body), total.numerator() == 0), table.label()};
}

ThetaFamily build_thetas(const SymbolTable& table, int max_level, int precision) {
  ThetaFamily out;
  for (int n = 0; n <= max_level; ++n) out.emplace(n, build_theta(table, n, precision));
  return out;
}

LambdaElement compat_defect(const ThetaFamily& thetas, int n, i64 a_p, int sign) {
  if (n < 2) throw Error(ErrorKind::Usage, "the three-term relation starts at level 2");
  const auto find = [&](int k) -> const LambdaElement& {
    const auto it = thetas.find(k);
    if (it == thetas.end()) throw Error(ErrorKind::IncompleteTable, "theta_" + std::to_string(k) + " missing");
    return it->second.body;
  };
  const LambdaElement& top = find(n);
  const LambdaElement& mid = find(n - 1);
  const LambdaElement& low = find(n - 2);
  const u32 p = top.context().prime();
  const int precision = std::min({top.context().precision(), mid.context().precision(), low.context().precision()});
  const auto ctx = IwasawaContext::omega(p, precision, n - 1);
  // theta_{n-2} is only defined mod omega_{n-2}, but Phi_{n-1} theta_{n-2} is
  // then well defined mod omega_{n-1}.
  const LambdaElement low_lift(ctx, poly::reduce_coefficients(low.residues(), ctx->modulus_value()));
  const LambdaElement trace = phi(ctx, n - 1) * low_lift;
  return top.reduce_to(ctx) - mid.reduce_to(ctx).scaled(a_p) - trace.scaled(sign);
}

CompatReport check_compat(const ThetaFamily& thetas, int n, i64 a_p) {
  const LambdaElement defect = compat_defect(thetas, n, a_p, -1);
  for (int i = 0; i < defect.length(); ++i) {
    if (defect.residue(i) != 0) {
      throw Error(ErrorKind::CompatFailed, "level " + std::to_string(n) + ": coefficient of X^" +
                                               std::to_string(i) + " is off by " + defect.coefficient(i).to_string());
    }
  }
  return CompatReport{n, defect.context().precision()};
}

}  // namespace iwasawa
