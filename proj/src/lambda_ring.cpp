#include "iwasawa/lambda_ring.hpp"

#include "iwasawa/error.hpp"

#include <algorithm>
#include <sstream>

namespace iwasawa {

namespace {

using poly::Poly;

std::string parity_name(int parity) { return parity == 0 ? "even" : "odd"; }

// Weierstrass preparation of a polynomial G (mod q = p^digits) that has a
// unit coefficient: G = P * U with P distinguished of degree lambda.
struct Prepared {
  int lambda = 0;
  Poly distinguished;  // monic, full coefficient list
  Poly unit;
};

Prepared prepare(const Poly& g, u32 p, u64 q, int digits) {
  Prepared out;
  out.lambda = -1;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] % p != 0) {
      out.lambda = static_cast<int>(i);
      break;
    }
  }
  if (out.lambda < 0) throw Error(ErrorKind::NotDistinguished, "no unit coefficient");
  const int lambda = out.lambda;
  if (lambda == 0) {
    out.distinguished = Poly{1 % q};
    out.unit = g;
    poly::trim(out.unit);
    return out;
  }
  Poly P(static_cast<std::size_t>(lambda + 1), 0);
  P[static_cast<std::size_t>(lambda)] = 1 % q;
  // Newton/Hensel lifting of the factor: each step corrects P by
  // R * Q^{-1} mod P where G = Q*P + R.
  const std::size_t inverse_length = static_cast<std::size_t>(lambda) * (digits + 1) + 1;
  const int max_steps = 2 * digits + 8;
  for (int step = 0; step <= max_steps; ++step) {
    auto [quot, rem] = poly::divrem_monic(g, P, q);
    if (poly::degree(rem) < 0) {
      out.distinguished = P;
      out.unit = quot;
      poly::trim(out.unit);
      return out;
    }
    if (step == max_steps) break;
    const Poly s = poly::rem_monic(quot, P, q);
    const Poly s_inv = poly::rem_monic(poly::series_inverse(s, inverse_length, q), P, q);
    const Poly delta = poly::rem_monic(poly::mul(rem, s_inv, q), P, q);
    for (int i = 0; i < lambda; ++i) {
      P[static_cast<std::size_t>(i)] =
          modarith::add(P[static_cast<std::size_t>(i)], delta[static_cast<std::size_t>(i)], q);
    }
  }
  throw Error(ErrorKind::PrecisionExhausted, "Weierstrass lifting did not converge");
}

Poly divide_by_p_power(const Poly& f, u32 p, int e, u64 q_small) {
  u64 pe = 1;
  for (int i = 0; i < e; ++i) pe *= p;
  Poly out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = (f[i] / pe) % q_small;
  return out;
}

std::string format_poly(const Poly& f, u64 q) {
  std::ostringstream os;
  bool first = true;
  for (int i = poly::degree(f); i >= 0; --i) {
    const i128 c = modarith::centered(f[static_cast<std::size_t>(i)], q);
    if (c == 0) continue;
    const long long cv = static_cast<long long>(c);
    const long long mag = cv < 0 ? -cv : cv;
    if (!first) os << (cv < 0 ? " - " : " + ");
    else if (cv < 0) os << "-";
    first = false;
    if (i == 0 || mag != 1) os << mag;
    if (i >= 1) os << "X";
    if (i >= 2) os << "^" << i;
  }
  if (first) os << "0";
  return os.str();
}

ContextPtr context_for_poly(u32 p, int digits, int length) {
  return IwasawaContext::power_series(p, std::max(digits, 1), std::max(length, 1));
}

}  // namespace

// ---- contexts ---------------------------------------------------------------

IwasawaContext::IwasawaContext(u32 p, int precision, Modulus modulus)
    : p_(p), precision_(precision), q_(modarith::prime_power(p, precision)),
      modulus_(std::move(modulus)) {
  if (precision_ < 1) throw Error(ErrorKind::PrecisionTooLarge, "precision must be at least 1");
  if (modulus_.degree() < 1) throw Error(ErrorKind::TruncationTooSmall, "modulus of degree 0");
  if (modulus_.full.back() != 1 % q_) throw Error(ErrorKind::NotDistinguished, "modulus not monic");
}

std::shared_ptr<const IwasawaContext> IwasawaContext::power_series(u32 p, int precision,
                                                                   int degree) {
  const u64 q = modarith::prime_power(p, precision);
  Modulus m;
  m.kind = Modulus::Kind::x_power;
  m.label = "X^" + std::to_string(degree);
  if (degree < 1) throw Error(ErrorKind::TruncationTooSmall, "truncation degree must be >= 1");
  m.full.assign(static_cast<std::size_t>(degree) + 1, 0);
  m.full.back() = 1 % q;
  return std::shared_ptr<const IwasawaContext>(new IwasawaContext(p, precision, std::move(m)));
}

std::shared_ptr<const IwasawaContext> IwasawaContext::omega(u32 p, int precision, int level) {
  if (level < 0) throw Error(ErrorKind::TruncationTooSmall, "negative level");
  const u64 q = modarith::prime_power(p, precision);
  Modulus m;
  m.kind = Modulus::Kind::omega;
  m.level = level;
  m.label = "omega_" + std::to_string(level);
  m.full = poly::omega(p, level, q);
  return std::shared_ptr<const IwasawaContext>(new IwasawaContext(p, precision, std::move(m)));
}

std::shared_ptr<const IwasawaContext> IwasawaContext::omega_parity(u32 p, int precision,
                                                                   int level, int parity) {
  if (level < 0) throw Error(ErrorKind::TruncationTooSmall, "negative level");
  const u64 q = modarith::prime_power(p, precision);
  Modulus m;
  m.kind = Modulus::Kind::omega;
  m.level = level;
  m.label = "omega_" + std::to_string(level) + "^" + parity_name(parity & 1);
  m.full = poly::omega_parity(p, level, parity & 1, q);
  return std::shared_ptr<const IwasawaContext>(new IwasawaContext(p, precision, std::move(m)));
}

std::shared_ptr<const IwasawaContext> IwasawaContext::custom(u32 p, int precision,
                                                             poly::Poly monic, std::string label,
                                                             bool x_divides) {
  const u64 q = modarith::prime_power(p, precision);
  Modulus m;
  m.kind = Modulus::Kind::custom;
  m.label = std::move(label);
  m.full = poly::reduce_coefficients(monic, q);
  poly::trim(m.full);
  m.x_divides = x_divides;
  return std::shared_ptr<const IwasawaContext>(new IwasawaContext(p, precision, std::move(m)));
}

bool IwasawaContext::same_ring(const IwasawaContext& other) const noexcept {
  return p_ == other.p_ && precision_ == other.precision_ && modulus_.full == other.modulus_.full;
}

std::string IwasawaContext::describe() const {
  return "Z_" + std::to_string(p_) + "[[X]]/(" + std::to_string(p_) + "^" +
         std::to_string(precision_) + ", " + modulus_.label + ")";
}

// ---- elements ---------------------------------------------------------------

LambdaElement::LambdaElement(ContextPtr ctx)
    : ctx_(std::move(ctx)), coeffs_(static_cast<std::size_t>(ctx_->degree()), 0) {}

LambdaElement::LambdaElement(ContextPtr ctx, poly::Poly residues, bool exact_zero_constant)
    : ctx_(std::move(ctx)), exact_zero_constant_(exact_zero_constant) {
  const u64 q = ctx_->modulus_value();
  for (auto& c : residues) c %= q;
  const auto d = static_cast<std::size_t>(ctx_->degree());
  if (residues.size() > d) residues = poly::rem_monic(residues, ctx_->modulus().full, q);
  residues.resize(d, 0);
  coeffs_ = std::move(residues);
  if (exact_zero_constant_ && coeffs_[0] != 0) {
    throw Error(ErrorKind::MixedContext, "exact-zero constant flag on a nonzero constant term");
  }
}

LambdaElement LambdaElement::from_integers(ContextPtr ctx, const std::vector<i64>& coeffs,
                                           bool exact_zero_constant) {
  const u64 q = ctx->modulus_value();
  return LambdaElement(std::move(ctx), poly::from_signed(coeffs, q), exact_zero_constant);
}

LambdaElement LambdaElement::one(ContextPtr ctx) {
  const u64 q = ctx->modulus_value();
  return LambdaElement(std::move(ctx), poly::Poly{1 % q});
}

PadicScalar LambdaElement::coefficient(int i) const {
  return PadicScalar(ctx_->prime(), ctx_->precision(), residue(i),
                     i == 0 && exact_zero_constant_);
}

PadicScalar LambdaElement::constant_term() const { return coefficient(0); }

LambdaElement LambdaElement::with_exact_zero_constant(bool flag) const {
  return LambdaElement(ctx_, coeffs_, flag);
}

bool LambdaElement::is_zero() const noexcept { return poly::degree(coeffs_) < 0; }

void LambdaElement::require_same_ring(const LambdaElement& rhs) const {
  if (ctx_ != rhs.ctx_ && !ctx_->same_ring(*rhs.ctx_)) {
    throw Error(ErrorKind::MixedContext, ctx_->describe() + " vs " + rhs.ctx_->describe());
  }
}

LambdaElement LambdaElement::operator+(const LambdaElement& rhs) const {
  require_same_ring(rhs);
  return LambdaElement(ctx_, poly::add(coeffs_, rhs.coeffs_, ctx_->modulus_value()),
                       exact_zero_constant_ && rhs.exact_zero_constant_);
}

LambdaElement LambdaElement::operator-(const LambdaElement& rhs) const {
  require_same_ring(rhs);
  return LambdaElement(ctx_, poly::sub(coeffs_, rhs.coeffs_, ctx_->modulus_value()),
                       exact_zero_constant_ && rhs.exact_zero_constant_);
}

LambdaElement LambdaElement::operator*(const LambdaElement& rhs) const {
  require_same_ring(rhs);
  const u64 q = ctx_->modulus_value();
  const bool flag = (exact_zero_constant_ || rhs.exact_zero_constant_) && ctx_->modulus().x_divides;
  if (ctx_->modulus().kind == Modulus::Kind::x_power) {
    return LambdaElement(ctx_, poly::mul_truncated(coeffs_, rhs.coeffs_, coeffs_.size(), q), flag);
  }
  return LambdaElement(ctx_, poly::mul(coeffs_, rhs.coeffs_, q), flag);
}

LambdaElement LambdaElement::operator-() const {
  return LambdaElement(ctx_, poly::sub(poly::Poly{}, coeffs_, ctx_->modulus_value()),
                       exact_zero_constant_);
}

LambdaElement LambdaElement::operator*(const PadicScalar& c) const {
  if (c.prime() != ctx_->prime() || c.precision() != ctx_->precision()) {
    throw Error(ErrorKind::MixedContext, "scalar " + c.to_string() + " in " + ctx_->describe());
  }
  if (c.exact_zero()) return LambdaElement(ctx_, poly::Poly{}, true);
  return LambdaElement(ctx_, poly::scale(coeffs_, c.residue(), ctx_->modulus_value()),
                       exact_zero_constant_);
}

LambdaElement LambdaElement::scaled(i64 c) const {
  return *this * PadicScalar::from_integer(c, ctx_->prime(), ctx_->precision());
}

LambdaElement LambdaElement::reduce_to(const ContextPtr& target) const {
  if (target->prime() != ctx_->prime()) {
    throw Error(ErrorKind::MixedContext, "reduction changes the prime");
  }
  if (target->precision() > ctx_->precision()) {
    throw Error(ErrorKind::MixedContext, "reduction cannot raise precision from " +
                                             std::to_string(ctx_->precision()) + " to " +
                                             std::to_string(target->precision()));
  }
  const u64 qt = target->modulus_value();
  const Poly ours = poly::reduce_coefficients(ctx_->modulus().full, qt);
  if (poly::degree(poly::rem_monic(ours, target->modulus().full, qt)) >= 0) {
    throw Error(ErrorKind::MixedContext,
                target->modulus().label + " does not divide " + ctx_->modulus().label);
  }
  return LambdaElement(target, poly::reduce_coefficients(coeffs_, qt),
                       exact_zero_constant_ && target->modulus().x_divides);
}

bool LambdaElement::operator==(const LambdaElement& rhs) const {
  return ctx_->same_ring(*rhs.ctx_) && coeffs_ == rhs.coeffs_;
}

std::string LambdaElement::to_string() const { return format_poly(coeffs_, ctx_->modulus_value()); }

// ---- cyclotomic factors -----------------------------------------------------

u64 phi_degree(u32 p, int n) {
  if (n == 0) return 1;
  u64 d = p - 1;
  for (int i = 1; i < n; ++i) d *= p;
  return d;
}

namespace {

LambdaElement element_from_full(const ContextPtr& ctx, const Poly& f, const std::string& what) {
  if (poly::degree(f) >= ctx->degree()) {
    throw Error(ErrorKind::TruncationTooSmall, what + " has degree " +
                                                   std::to_string(poly::degree(f)) + ", context " +
                                                   ctx->describe());
  }
  return LambdaElement(ctx, f);
}

}  // namespace

LambdaElement phi(const ContextPtr& ctx, int n) {
  if (n < 0) throw Error(ErrorKind::TruncationTooSmall, "negative cyclotomic index");
  if (phi_degree(ctx->prime(), n) >= static_cast<u64>(ctx->degree())) {
    throw Error(ErrorKind::TruncationTooSmall,
                "Phi_" + std::to_string(n) + " does not fit in " + ctx->describe());
  }
  return element_from_full(ctx, poly::cyclotomic(ctx->prime(), n, ctx->modulus_value()),
                           "Phi_" + std::to_string(n));
}

LambdaElement omega(const ContextPtr& ctx, int n) {
  if (n < 0) throw Error(ErrorKind::TruncationTooSmall, "negative level");
  u64 pn = 1;
  for (int i = 0; i < n; ++i) pn *= ctx->prime();
  if (pn >= static_cast<u64>(ctx->degree())) {
    throw Error(ErrorKind::TruncationTooSmall,
                "omega_" + std::to_string(n) + " does not fit in " + ctx->describe());
  }
  return element_from_full(ctx, poly::omega(ctx->prime(), n, ctx->modulus_value()),
                           "omega_" + std::to_string(n));
}

LambdaElement omega_signed(const ContextPtr& ctx, int n, int parity) {
  if (n < 0) throw Error(ErrorKind::TruncationTooSmall, "negative level");
  u64 deg = 1;
  for (int i = 1; i <= n; ++i) {
    if (i % 2 == (parity & 1)) deg += phi_degree(ctx->prime(), i);
  }
  if (deg >= static_cast<u64>(ctx->degree())) {
    throw Error(ErrorKind::TruncationTooSmall, "omega_" + std::to_string(n) + "^" +
                                                   parity_name(parity & 1) +
                                                   " does not fit in " + ctx->describe());
  }
  return element_from_full(ctx, poly::omega_parity(ctx->prime(), n, parity & 1,
                                                   ctx->modulus_value()),
                           "omega_signed");
}

// ---- division ---------------------------------------------------------------

namespace {

void require_distinguished(const Poly& full, u32 p) {
  const int d = poly::degree(full);
  if (d < 1) throw Error(ErrorKind::NotDistinguished, "divisor has degree < 1");
  if (full[static_cast<std::size_t>(d)] != 1) {
    throw Error(ErrorKind::NotDistinguished, "divisor is not monic");
  }
  for (int i = 0; i < d; ++i) {
    if (full[static_cast<std::size_t>(i)] % p != 0) {
      throw Error(ErrorKind::NotDistinguished,
                  "coefficient of X^" + std::to_string(i) + " is a unit");
    }
  }
}

// Digits to which F mod P is independent of the chosen representative of F
// modulo the context modulus W.
int representative_digits(const IwasawaContext& ctx, const Poly& divisor) {
  const u64 q = ctx.modulus_value();
  const Poly w_mod_p = poly::rem_monic(ctx.modulus().full, divisor, q);
  return poly::content_valuation(w_mod_p, ctx.prime(), ctx.precision());
}

}  // namespace

DivRem divrem(const LambdaElement& f, const LambdaElement& divisor) {
  const auto& ctx = f.context();
  if (!ctx.same_ring(divisor.context())) {
    throw Error(ErrorKind::MixedContext, ctx.describe() + " vs " + divisor.context().describe());
  }
  Poly d = divisor.residues();
  poly::trim(d);
  require_distinguished(d, ctx.prime());
  const u64 q = ctx.modulus_value();
  auto [quot, rem] = poly::divrem_monic(f.residues(), d, q);
  // Test-mode style self check, cheap enough to keep on: F = Q*P + R.
  const Poly back = poly::add(poly::mul(quot, d, q), rem, q);
  Poly lhs = f.residues();
  poly::trim(lhs);
  Poly rhs = back;
  poly::trim(rhs);
  if (lhs != rhs) throw Error(ErrorKind::PrecisionExhausted, "division identity failed");
  DivRem out{LambdaElement(f.context_ptr(), quot), LambdaElement(f.context_ptr(), rem),
             representative_digits(ctx, d)};
  return out;
}

// ---- Weierstrass preparation -----------------------------------------------

InvariantReport weierstrass(const LambdaElement& f) {
  const auto& ctx = f.context();
  const u32 p = ctx.prime();
  const int M = ctx.precision();
  InvariantReport report;
  report.certified_length = ctx.degree();

  const Poly& c = f.residues();
  const int mu = poly::content_valuation(c, p, M);
  if (mu >= M) return report;  // every coefficient vanishes at this precision
  int lambda = -1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] != 0 && modarith::valuation(c[i], p, M) == mu) {
      lambda = static_cast<int>(i);
      break;
    }
  }
  report.mu = mu;
  report.lambda = lambda;
  report.mu_certified = (mu == 0);

  const int digits = M - mu;
  const u64 qd = modarith::prime_power(p, digits);
  const Poly g = divide_by_p_power(c, p, mu, qd);
  const Prepared prep = prepare(g, p, qd, digits);

  const Poly w = poly::reduce_coefficients(ctx.modulus().full, qd);
  const int rep_digits =
      lambda == 0 ? digits
                  : poly::content_valuation(poly::rem_monic(w, prep.distinguished, qd), p, digits);
  report.certified_digits = std::min(digits, rep_digits);

  // Re-multiplication: p^mu * P * U must reproduce F modulo p^M.
  const u64 q = ctx.modulus_value();
  u64 pmu = 1;
  for (int i = 0; i < mu; ++i) pmu *= p;
  Poly back = poly::scale(poly::mul(prep.distinguished, prep.unit, q), pmu % q, q);
  poly::trim(back);
  Poly orig = c;
  poly::trim(orig);
  // P and U are only known mod p^{M-mu}; the factor p^mu makes the product exact mod p^M.
  if (back != orig) {
    throw Error(ErrorKind::PrecisionExhausted, "Weierstrass re-multiplication failed");
  }

  report.distinguished_part =
      LambdaElement(context_for_poly(p, digits, lambda + 1), prep.distinguished,
                    lambda >= 1 && f.exact_zero_constant());
  report.unit_part = LambdaElement(context_for_poly(p, digits, ctx.degree()), prep.unit);
  return report;
}

// ---- gcd --------------------------------------------------------------------

std::string LambdaGcd::to_string() const {
  std::vector<std::string> parts;
  if (mu == 1) parts.emplace_back("p");
  if (mu > 1) parts.push_back("p^" + std::to_string(mu));
  if (x_exponent == 1) parts.emplace_back("X");
  if (x_exponent > 1) parts.push_back("X^" + std::to_string(x_exponent));
  for (const auto& [n, e] : phi_exponents) {
    parts.push_back("Phi_" + std::to_string(n) + (e > 1 ? "^" + std::to_string(e) : ""));
  }
  if (residual) parts.push_back("(" + residual->to_string() + ")");
  if (parts.empty()) return "1";
  std::string out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out += "*" + parts[i];
  return out;
}

namespace {

int x_order(const Poly& f) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] != 0) return static_cast<int>(i);
  }
  return static_cast<int>(f.size());
}

Poly drop_low(const Poly& f, int k) {
  if (static_cast<std::size_t>(k) >= f.size()) return {};
  return Poly(f.begin() + k, f.end());
}

}  // namespace

LambdaGcd gcd_lambda(const LambdaElement& f, const LambdaElement& g) {
  const u32 p = f.context().prime();
  if (g.context().prime() != p) throw Error(ErrorKind::MixedContext, "gcd across primes");
  const InvariantReport rf = weierstrass(f);
  const InvariantReport rg = weierstrass(g);
  if (!rf.conclusive() || !rg.conclusive()) {
    throw Error(ErrorKind::PrecisionExhausted, "gcd of an element with inconclusive invariants");
  }

  LambdaGcd out;
  out.mu = std::min(*rf.mu, *rg.mu);
  out.mu_certified = rf.mu_certified || rg.mu_certified;

  int digits = std::min(rf.certified_digits, rg.certified_digits);
  if (digits < 1) throw Error(ErrorKind::PrecisionExhausted, "no certified digits left");
  u64 q = modarith::prime_power(p, digits);
  Poly a = poly::reduce_coefficients(rf.distinguished_part->residues(), q);
  Poly b = poly::reduce_coefficients(rg.distinguished_part->residues(), q);
  poly::trim(a);
  poly::trim(b);

  // Powers of X. The upper bound is always certified (a unit coefficient
  // sits at index alpha in one of the two); the lower bound is certified only
  // for alpha <= 1, through the exact constant terms.
  const int alpha = std::min(x_order(a), x_order(b));
  out.x_exponent = alpha;
  out.x_certified = alpha == 0 || (alpha == 1 && f.exact_zero_constant() && g.exact_zero_constant());
  a = drop_low(a, alpha);
  b = drop_low(b, alpha);

  // Cyclotomic factors, detected by exact remainder tests. Presence is only
  // known modulo p^digits, so any hit makes the result heuristic.
  for (int n = 1;; ++n) {
    const u64 dn = phi_degree(p, n);
    if (dn > static_cast<u64>(std::min(poly::degree(a), poly::degree(b)))) break;
    const Poly phin = poly::cyclotomic(p, n, q);
    while (dn <= static_cast<u64>(std::min(poly::degree(a), poly::degree(b)))) {
      auto [qa, ra] = poly::divrem_monic(a, phin, q);
      auto [qb, rb] = poly::divrem_monic(b, phin, q);
      if (poly::degree(ra) >= 0 || poly::degree(rb) >= 0) break;
      a = qa;
      b = qb;
      poly::trim(a);
      poly::trim(b);
      ++out.phi_exponents[n];
    }
  }

  // Euclid on the remaining distinguished parts.
  if (poly::degree(a) >= 1 && poly::degree(b) >= 1) {
    for (;;) {
      if (poly::degree(a) < poly::degree(b)) std::swap(a, b);
      Poly r = poly::rem_monic(a, b, q);
      const int c = poly::content_valuation(r, p, digits);
      if (c >= digits) {
        // b divides a at every digit we still hold: a common factor we can
        // see but not certify.
        out.residual = LambdaElement(context_for_poly(p, digits, poly::degree(b) + 1), b);
        out.residual_certified = false;
        break;
      }
      const int next_digits = digits - c;
      const u64 nq = modarith::prime_power(p, next_digits);
      const Prepared prep = prepare(divide_by_p_power(r, p, c, nq), p, nq, next_digits);
      digits = next_digits;
      q = nq;
      if (prep.lambda == 0) break;  // coprime
      a = poly::reduce_coefficients(b, q);
      b = prep.distinguished;
      if (digits < 1) throw Error(ErrorKind::PrecisionExhausted, "Euclid ran out of digits");
    }
  }
  out.certified_digits = digits;
  return out;
}

}  // namespace iwasawa
