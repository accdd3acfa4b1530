#include "iwasawa/module_model.hpp"

#include "iwasawa/error.hpp"

#include <algorithm>
#include <numeric>

namespace iwasawa {

namespace {

// Exact integer polynomial helpers for small cyclotomic factors.
std::vector<i128> binomial_row(u64 n) {
  std::vector<i128> row(n + 1, 0);
  row[0] = 1;
  constexpr i128 limit = static_cast<i128>(1) << 100;
  for (u64 r = 1; r <= n; ++r) {
    for (u64 k = r; k >= 1; --k) {
      row[k] += row[k - 1];
      if (row[k] > limit) throw Error(ErrorKind::PrecisionTooLarge, "binomial overflow");
    }
  }
  return row;
}

std::vector<i64> exact_phi(u32 p, int n) {
  if (n == 0) return {0, 1};
  u64 pn = 1;
  for (int i = 0; i < n; ++i) pn *= p;
  const u64 pm = pn / p;
  // (1+X)^{p^n} - 1 divided by (1+X)^{p^{n-1}} - 1, both monic.
  std::vector<i128> num = binomial_row(pn);
  num[0] -= 1;
  std::vector<i128> den = binomial_row(pm);
  den[0] -= 1;
  std::vector<i128> quot(pn - pm + 1, 0);
  for (u64 k = pn + 1; k-- > pm;) {
    const i128 c = num[k];
    quot[k - pm] = c;
    for (u64 i = 0; i <= pm; ++i) num[k - pm + i] -= c * den[i];
  }
  std::vector<i64> out;
  for (i128 c : quot) {
    if (c > INT64_MAX || c < INT64_MIN) {
      throw Error(ErrorKind::PrecisionTooLarge, "Phi_" + std::to_string(n) + " coefficient overflow");
    }
    out.push_back(static_cast<i64>(c));
  }
  return out;
}

ContextPtr context_for(const ElementaryModule& m) {
  return IwasawaContext::power_series(m.p, m.mu() + 12, m.lambda() + 1);
}

LambdaElement generator_in(const ElementaryModule& m, const ContextPtr& ctx) {
  auto g = LambdaElement::one(ctx);
  const auto p = PadicScalar::from_integer(m.p, m.p, ctx->precision());
  for (int a : m.p_part) {
    for (int i = 0; i < a; ++i) g = g * p;
  }
  for (const auto& part : m.poly_part) {
    const auto f = part.factor.as_element(ctx);
    for (int i = 0; i < part.exponent; ++i) g = g * f;
  }
  return g;
}

void require_torsion(const ElementaryModule& m, const char* what) {
  if (m.free_rank > 0) {
    throw Error(ErrorKind::NotTorsion,
                std::string(what) + " has free rank " + std::to_string(m.free_rank));
  }
}

bool divides_generator(const ElementaryModule& tor, const IrreducibleElement& f) {
  const auto ctx = context_for(tor);
  const auto g = generator_in(tor, ctx);
  if (f.is_p) return *weierstrass(g).mu >= 1;
  if (f.factor->degree() > tor.lambda()) return false;
  return divrem(g, f.factor->as_element(ctx)).remainder.is_zero();
}

bool killed_by_summand(const ElementaryModule& tor, const IrreducibleElement& f) {
  if (f.is_p) return !tor.p_part.empty();
  return std::any_of(tor.poly_part.begin(), tor.poly_part.end(),
                     [&](const auto& part) { return part.factor == *f.factor; });
}

}  // namespace

DistinguishedFactor::DistinguishedFactor(u32 p, std::vector<i64> coeffs, std::string name)
    : p_(p), coeffs_(std::move(coeffs)), name_(std::move(name)) {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  if (coeffs_.size() < 2 || coeffs_.back() != 1) {
    throw Error(ErrorKind::NotDistinguished, name_ + " is not monic of positive degree");
  }
  for (std::size_t i = 0; i + 1 < coeffs_.size(); ++i) {
    if (coeffs_[i] % static_cast<i64>(p) != 0) {
      throw Error(ErrorKind::NotDistinguished, name_ + " has a unit coefficient");
    }
  }
}

DistinguishedFactor DistinguishedFactor::x(u32 p) { return DistinguishedFactor(p, {0, 1}, "X"); }

DistinguishedFactor DistinguishedFactor::phi(u32 p, int n) {
  if (n == 0) return x(p);
  return DistinguishedFactor(p, exact_phi(p, n), "Phi_" + std::to_string(n));
}

LambdaElement DistinguishedFactor::as_element(const ContextPtr& ctx) const {
  return LambdaElement::from_integers(ctx, coeffs_);
}

int ElementaryModule::mu() const noexcept { return std::accumulate(p_part.begin(), p_part.end(), 0); }

int ElementaryModule::lambda() const noexcept {
  int l = 0;
  for (const auto& part : poly_part) l += part.exponent * part.factor.degree();
  return l;
}

ElementaryModule ElementaryModule::torsion_part() const {
  ElementaryModule t = *this;
  t.free_rank = 0;
  return t;
}

ElementaryModule ElementaryModule::direct_sum(const ElementaryModule& other) const {
  if (other.p != p) throw Error(ErrorKind::MixedContext, "direct sum across primes");
  ElementaryModule s = *this;
  s.p_part.insert(s.p_part.end(), other.p_part.begin(), other.p_part.end());
  s.poly_part.insert(s.poly_part.end(), other.poly_part.begin(), other.poly_part.end());
  s.free_rank += other.free_rank;
  return s;
}

LambdaElement char_ideal(const ElementaryModule& m) {
  require_torsion(m, "module");
  return generator_in(m, context_for(m));
}

FactoredIdeal char_ideal_factored(const ElementaryModule& m) {
  require_torsion(m, "module");
  FactoredIdeal out;
  out.mu = m.mu();
  for (const auto& part : m.poly_part) {
    const auto& f = part.factor;
    if (f == DistinguishedFactor::x(m.p)) {
      out.x_exponent += part.exponent;
      continue;
    }
    bool matched = false;
    for (int n = 1; phi_degree(m.p, n) <= static_cast<u64>(f.degree()); ++n) {
      if (phi_degree(m.p, n) == static_cast<u64>(f.degree()) && f == DistinguishedFactor::phi(m.p, n)) {
        out.phi[n] += part.exponent;
        matched = true;
        break;
      }
    }
    if (!matched) out.others[f.name()] += part.exponent;
  }
  return out;
}

FinitenessCheck f_torsion_finite(const ElementaryModule& m, const IrreducibleElement& f) {
  const auto tor = m.torsion_part();
  FinitenessCheck out;
  out.by_divisibility = !divides_generator(tor, f);
  out.by_factors = !killed_by_summand(tor, f);
  return out;
}

SesCheck ses_char_check(const ElementaryModule& a, const ElementaryModule& b,
                        const ElementaryModule& c) {
  require_torsion(a, "A");
  const auto ct = c.torsion_part();
  const auto bt = b.torsion_part();
  const auto lhs = char_ideal_factored(a) * char_ideal_factored(ct);
  const auto rhs = char_ideal_factored(bt);
  SesCheck out;
  out.multiplicative = lhs == rhs;
  if (out.multiplicative && a.lambda() + ct.lambda() == bt.lambda()) {
    // Cross-check on generators: equal up to a unit means equal here, since
    // all factors are monic and the p-power is explicit.
    const auto ctx = IwasawaContext::power_series(a.p, bt.mu() + 12, bt.lambda() + 1);
    out.multiplicative = generator_in(a, ctx) * generator_in(ct, ctx) == generator_in(bt, ctx);
  } else {
    out.multiplicative = false;
  }
  out.detail = "(" + lhs.to_string() + ") vs (" + rhs.to_string() + ")";
  return out;
}

SesCoprimality ses_coprimality_check(const ElementaryModule& a, const ElementaryModule& b,
                                     const ElementaryModule& c, const IrreducibleElement& f) {
  const bool fa = divides_generator(a.torsion_part(), f);
  const bool fb = divides_generator(b.torsion_part(), f);
  const bool fc = divides_generator(c.torsion_part(), f);
  SesCoprimality out;
  out.sub_from_middle = fb || !fa;
  out.middle_from_ends = fa || fc || !fb;
  return out;
}

FactoredIdeal gr_ideal(const RankSequence& e) {
  FactoredIdeal out;
  for (std::size_t n = 0; n < e.e.size(); ++n) {
    const int en = e.e[n];
    if (en < 1) continue;
    if (n == 0) {
      out.x_exponent += en - 1;
    } else if (en > 1) {
      out.phi[static_cast<int>(n)] += en - 1;
    }
  }
  return out;
}

FactoredIdeal kp_ideal(const RankSequence& e) {
  FactoredIdeal out;
  out.x_exponent = e.at(0);
  for (std::size_t n = 1; n < e.e.size(); ++n) {
    if (e.e[n] > 1) out.phi[static_cast<int>(n)] += e.e[n] - 1;
  }
  return out;
}

}  // namespace iwasawa
