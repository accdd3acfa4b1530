#include "iwasawa/signed_extract.hpp"
#include "iwasawa/error.hpp"

#include <algorithm>

namespace iwasawa {

using poly::Poly;

std::string_view to_string(SignedKind kind) noexcept {
  return kind == SignedKind::plus_minus ? "plus/minus" : "sharp/flat";
}

std::string_view to_string(ExtractionMethod method) noexcept {
  switch (method) {
    case ExtractionMethod::parity_factor: return "parity-factor";
    case ExtractionMethod::linear_system: return "linear-system";
    case ExtractionMethod::invariant_fit: return "invariant-fit";
  }
  return "?";
}

u64 parity_product_degree(u32 p, int n) {
  u64 total = 0;
  for (int i = n - 1; i >= 1; i -= 2) total += phi_degree(p, i);
  return total;
}

namespace {

int top_level(const ThetaFamily& thetas) {
  if (thetas.empty()) throw Error(ErrorKind::NotStabilized, "no theta elements");
  return thetas.rbegin()->first;
}

const LambdaElement& theta_at(const ThetaFamily& thetas, int n) {
  const auto it = thetas.find(n);
  if (it == thetas.end()) throw Error(ErrorKind::IncompleteTable, "theta_" + std::to_string(n) + " missing");
  return it->second.body;
}

// Sorted (mu, lambda) pairs of the conclusive entries, for label-free comparison.
std::vector<std::pair<int, int>> invariant_multiset(const std::vector<std::pair<std::optional<int>, std::optional<int>>>& xs) {
  std::vector<std::pair<int, int>> out;
  for (const auto& [mu, lambda] : xs) {
    if (mu && lambda) out.emplace_back(*mu, *lambda);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void attach_fit(SignedPair& pair, const ThetaFamily& thetas) {
  try {
    pair.fit = invariant_fit(thetas);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotStabilized) throw;
    return;
  }
  const bool fit_complete = pair.fit.size() == 2 && pair.fit[0].conclusive() && pair.fit[1].conclusive();
  if (!pair.stabilized || !fit_complete) return;
  const auto mine = invariant_multiset({{pair.series[0].invariants.mu, pair.series[0].invariants.lambda},
                                        {pair.series[1].invariants.mu, pair.series[1].invariants.lambda}});
  const auto fitted = invariant_multiset({{pair.fit[0].mu, pair.fit[0].lambda}, {pair.fit[1].mu, pair.fit[1].lambda}});
  pair.fit_agrees = mine == fitted;
}

}  // namespace

SignedPair extract_plus_minus(const ThetaFamily& thetas, i64 a_p) {
  if (a_p != 0) throw Error(ErrorKind::WrongReductionType, "plus/minus series need a_p = 0");
  const int top = top_level(thetas);
  if (top < 1) throw Error(ErrorKind::NotStabilized, "levels 0 and 1 are both needed");

  SignedPair pair;
  pair.kind = SignedKind::plus_minus;
  pair.method = ExtractionMethod::parity_factor;
  for (int parity : {0, 1}) {
    const int n = (top % 2 == parity) ? top : top - 1;
    const LambdaElement& theta = theta_at(thetas, n);
    const ContextPtr& ctx = theta.context_ptr();
    const u32 p = ctx->prime();
    LambdaElement quotient = theta;
    if (n >= 2) {
      const Poly product = poly::phi_parity_product(p, n - 1, (n - 1) % 2, ctx->modulus_value());
      const DivRem qr = divrem(theta, LambdaElement(ctx, product));
      if (!qr.remainder.is_zero()) {
        throw Error(ErrorKind::CompatFailed, "theta_" + std::to_string(n) + " is not divisible by its parity product");
      }
      quotient = qr.quotient;
    }
    const auto target = IwasawaContext::omega_parity(p, ctx->precision(), n, n % 2);
    LambdaElement series = quotient.reduce_to(target).with_exact_zero_constant(theta.exact_zero_constant());
    // theta_n = -Phi_{n-1} theta_{n-2}: alternate the sign so that levels of
    // one parity give the same series.
    if ((n / 2) % 2 == 1) series = -series;
    InvariantReport inv = weierstrass(series);
    pair.series.push_back(SignedSeries{parity == 0 ? "+" : "-", n, std::move(series), std::move(inv)});
  }
  pair.stabilized = pair.series[0].invariants.conclusive() && pair.series[1].invariants.conclusive();
  if (!pair.series[0].invariants.conclusive() && !pair.series[1].invariants.conclusive()) {
    throw Error(ErrorKind::NotStabilized, "neither signed series has conclusive invariants");
  }
  attach_fit(pair, thetas);
  return pair;
}

namespace {

struct Solution {
  std::vector<u64> x;
  int certified_digits = 0;
};

// Solves M x = y over Z/p^prec for a consistent, possibly overdetermined
// system with a unique solution. Pivots are chosen with least valuation in
// their column; each pivot of valuation v costs v digits.
Solution solve_mod_prime_power(std::vector<std::vector<u64>> m, std::vector<u64> y, u32 p, int prec) {
  const u64 q = modarith::prime_power(p, prec);
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  std::vector<std::size_t> pivot_row(cols);
  std::vector<int> pivot_val(cols);
  std::vector<bool> used(rows, false);
  int loss = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t best = rows;
    int best_val = prec;
    for (std::size_t r = 0; r < rows; ++r) {
      if (used[r] || m[r][c] == 0) continue;
      const int v = modarith::valuation(m[r][c], p, prec);
      if (v < best_val) {
        best_val = v;
        best = r;
      }
    }
    if (best == rows) {
      throw Error(ErrorKind::SingularSystem, "column " + std::to_string(c) + " has no pivot mod p^" + std::to_string(prec));
    }
    used[best] = true;
    pivot_row[c] = best;
    pivot_val[c] = best_val;
    loss += best_val;
    const u64 scale = modarith::prime_power(p, best_val);
    const u64 unit_inv = *modarith::inverse((m[best][c] / scale) % q, q);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == best || m[r][c] == 0) continue;
      if (used[r]) {
        // Rows already used as pivots keep their entries in later columns;
        // back substitution handles them.
        continue;
      }
      const u64 factor = modarith::mul(m[r][c] / scale, unit_inv, q);
      for (std::size_t k = c; k < cols; ++k) m[r][k] = modarith::sub(m[r][k], modarith::mul(factor, m[best][k], q), q);
      y[r] = modarith::sub(y[r], modarith::mul(factor, y[best], q), q);
    }
  }
  const int certified = prec - loss;
  if (certified < 1) throw Error(ErrorKind::SingularSystem, "pivots consumed all " + std::to_string(prec) + " digits");
  const u64 qc = modarith::prime_power(p, certified);
  // Rows never used as pivots must vanish: the system is overdetermined.
  for (std::size_t r = 0; r < rows; ++r) {
    if (!used[r] && y[r] % qc != 0) {
      throw Error(ErrorKind::CompatFailed, "theta levels are inconsistent with the recurrence (row " + std::to_string(r) + ")");
    }
  }
  std::vector<u64> x(cols, 0);
  for (std::size_t c = cols; c-- > 0;) {
    const std::size_t r = pivot_row[c];
    u64 rhs = y[r];
    for (std::size_t k = c + 1; k < cols; ++k) rhs = modarith::sub(rhs, modarith::mul(m[r][k], x[k], q), q);
    const u64 scale = modarith::prime_power(p, pivot_val[c]);
    if (rhs % scale != 0 && (rhs % qc) % scale != 0) {
      throw Error(ErrorKind::CompatFailed, "theta levels are inconsistent with the recurrence (column " + std::to_string(c) + ")");
    }
    const u64 unit_inv = *modarith::inverse((m[r][c] / scale) % q, q);
    x[c] = modarith::mul(rhs / scale, unit_inv, q);
  }
  for (auto& v : x) v %= qc;
  return Solution{std::move(x), certified};
}

// X^t * s mod w for t = 0..count-1, as columns of coefficients.
std::vector<Poly> shifted_columns(const Poly& s, const Poly& w, int count, u64 q) {
  const int d = static_cast<int>(w.size()) - 1;
  std::vector<Poly> cols;
  Poly cur = poly::rem_monic(s, w, q);
  cur.resize(static_cast<std::size_t>(d), 0);
  for (int t = 0; t < count; ++t) {
    cols.push_back(cur);
    // multiply by X and reduce by the monic w
    Poly next(static_cast<std::size_t>(d) + 1, 0);
    for (int i = 0; i < d; ++i) next[static_cast<std::size_t>(i) + 1] = cur[static_cast<std::size_t>(i)];
    const u64 top = next[static_cast<std::size_t>(d)];
    for (int i = 0; i < d; ++i) {
      next[static_cast<std::size_t>(i)] = modarith::sub(next[static_cast<std::size_t>(i)], modarith::mul(top, w[static_cast<std::size_t>(i)], q), q);
    }
    next.resize(static_cast<std::size_t>(d));
    cur = std::move(next);
  }
  return cols;
}

}  // namespace

SignedPair extract_sharp_flat(const ThetaFamily& thetas, i64 a_p) {
  const int top = top_level(thetas);
  const LambdaElement& theta_top = theta_at(thetas, top);
  const u32 p = theta_top.context().prime();
  if (a_p == 0 || a_p % static_cast<i64>(p) != 0) {
    throw Error(ErrorKind::WrongReductionType, "sharp/flat series need p | a_p and a_p != 0");
  }
  if (top < 1) throw Error(ErrorKind::NotStabilized, "levels 0 and 1 are both needed");
  const LambdaElement& theta_low = theta_at(thetas, top - 1);
  const int prec = std::min(theta_top.context().precision(), theta_low.context().precision());
  const u64 q = modarith::prime_power(p, prec);

  // The two fundamental solutions of the recurrence, as polynomials mod p^M,
  // and their constant terms as exact integers.
  std::vector<Poly> u{{1}, {0}}, v{{0}, {1}};
  std::vector<i128> u0{1, 0}, v0{0, 1};
  for (int k = 1; k < top; ++k) {
    const Poly phik = poly::cyclotomic(p, k, q);
    const u64 ap = modarith::reduce(a_p, q);
    u.push_back(poly::sub(poly::scale(u[k], ap, q), poly::mul(phik, u[k - 1], q), q));
    v.push_back(poly::sub(poly::scale(v[k], ap, q), poly::mul(phik, v[k - 1], q), q));
    u0.push_back(a_p * u0[k] - static_cast<i128>(p) * u0[k - 1]);
    v0.push_back(a_p * v0[k] - static_cast<i128>(p) * v0[k - 1]);
  }

  const auto ctx_a = IwasawaContext::omega_parity(p, prec, top, 0);
  const auto ctx_b = IwasawaContext::omega_parity(p, prec, top, 1);
  const int da = ctx_a->degree(), db = ctx_b->degree();

  std::vector<std::vector<u64>> matrix;
  std::vector<u64> rhs;
  for (int level : {top, top - 1}) {
    const Poly w = poly::omega(p, level, q);
    const auto cols_a = shifted_columns(u[static_cast<std::size_t>(level)], w, da, q);
    const auto cols_b = shifted_columns(v[static_cast<std::size_t>(level)], w, db, q);
    const Poly target = poly::reduce_coefficients(theta_at(thetas, level).residues(), q);
    const int d = static_cast<int>(w.size()) - 1;
    for (int i = 0; i < d; ++i) {
      std::vector<u64> row;
      row.reserve(static_cast<std::size_t>(da + db));
      for (const auto& c : cols_a) row.push_back(c[static_cast<std::size_t>(i)]);
      for (const auto& c : cols_b) row.push_back(c[static_cast<std::size_t>(i)]);
      matrix.push_back(std::move(row));
      rhs.push_back(static_cast<std::size_t>(i) < target.size() ? target[static_cast<std::size_t>(i)] : 0);
    }
  }
  const Solution sol = solve_mod_prime_power(std::move(matrix), std::move(rhs), p, prec);

  // A(0) and B(0) solve the same system at X = 0 with Phi_k(0) = p; when that
  // 2x2 integer system is invertible and both theta constants vanish exactly,
  // so do A(0) and B(0).
  const i128 det = u0[static_cast<std::size_t>(top)] * v0[static_cast<std::size_t>(top - 1)] -
                   v0[static_cast<std::size_t>(top)] * u0[static_cast<std::size_t>(top - 1)];
  const bool exact = det != 0 && theta_top.exact_zero_constant() && theta_low.exact_zero_constant();

  const auto digits_a = IwasawaContext::omega_parity(p, sol.certified_digits, top, 0);
  const auto digits_b = IwasawaContext::omega_parity(p, sol.certified_digits, top, 1);
  Poly a_coeffs(sol.x.begin(), sol.x.begin() + da);
  Poly b_coeffs(sol.x.begin() + da, sol.x.end());
  LambdaElement a(digits_a, std::move(a_coeffs), exact);
  LambdaElement b(digits_b, std::move(b_coeffs), exact);

  SignedPair pair;
  pair.kind = SignedKind::sharp_flat;
  pair.method = ExtractionMethod::linear_system;
  InvariantReport ia = weierstrass(a), ib = weierstrass(b);
  pair.series.push_back(SignedSeries{"sharp", top, std::move(a), std::move(ia)});
  pair.series.push_back(SignedSeries{"flat", top, std::move(b), std::move(ib)});
  pair.stabilized = pair.series[0].invariants.conclusive() && pair.series[1].invariants.conclusive();
  if (!pair.series[0].invariants.conclusive() && !pair.series[1].invariants.conclusive()) {
    throw Error(ErrorKind::NotStabilized, "neither signed series has conclusive invariants");
  }
  attach_fit(pair, thetas);
  return pair;
}

SignedPair extract_signed(const ThetaFamily& thetas, i64 a_p) {
  if (a_p == 0) return extract_plus_minus(thetas, a_p);
  return extract_sharp_flat(thetas, a_p);
}

std::vector<ParityFit> invariant_fit(const ThetaFamily& thetas) {
  std::vector<ParityFit> fits{ParityFit{0, {}, {}, {}}, ParityFit{1, {}, {}, {}}};
  for (const auto& [n, theta] : thetas) {
    const InvariantReport inv = weierstrass(theta.body);
    if (!inv.conclusive()) continue;
    const u32 p = theta.body.context().prime();
    const int lambda = *inv.lambda - static_cast<int>(parity_product_degree(p, n));
    ParityFit& fit = fits[static_cast<std::size_t>(n % 2)];
    if (lambda < 0) {
      throw Error(ErrorKind::NotStabilized, "lambda(theta_" + std::to_string(n) + ") is below its parity product degree");
    }
    if (fit.conclusive() && (*fit.mu != *inv.mu || *fit.lambda != lambda)) {
      throw Error(ErrorKind::NotStabilized, "invariants drift between levels " + std::to_string(fit.levels.back()) +
                                                " and " + std::to_string(n));
    }
    fit.mu = inv.mu;
    fit.lambda = lambda;
    fit.levels.push_back(n);
  }
  if (!fits[0].conclusive() && !fits[1].conclusive()) {
    throw Error(ErrorKind::NotStabilized, "no theta level has conclusive invariants");
  }
  return fits;
}

}  // namespace iwasawa
