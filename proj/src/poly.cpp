#include "iwasawa/poly.hpp"

#include "iwasawa/error.hpp"

#include <algorithm>

namespace iwasawa::poly {

int degree(const Poly& f) noexcept {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) {
    if (f[static_cast<std::size_t>(i)] != 0) return i;
  }
  return -1;
}

void trim(Poly& f) { f.resize(static_cast<std::size_t>(degree(f) + 1)); }

Poly add(const Poly& a, const Poly& b, u64 q) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = modarith::add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0, q);
  }
  return r;
}

Poly sub(const Poly& a, const Poly& b, u64 q) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = modarith::sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0, q);
  }
  return r;
}

Poly mul_truncated(const Poly& a, const Poly& b, std::size_t length, u64 q) {
  Poly r(length, 0);
  if (a.empty() || b.empty()) return r;
  // Accumulate in 128 bits and reduce lazily; q < 2^62 so each product is
  // < 2^124 and a handful of additions cannot overflow.
  for (std::size_t i = 0; i < a.size() && i < length; ++i) {
    if (a[i] == 0) continue;
    const u128 ai = a[i];
    const std::size_t jmax = std::min(b.size(), length - i);
    for (std::size_t j = 0; j < jmax; ++j) {
      if (b[j] == 0) continue;
      r[i + j] = static_cast<u64>((r[i + j] + ai * b[j]) % q);
    }
  }
  return r;
}

Poly mul(const Poly& a, const Poly& b, u64 q) {
  if (a.empty() || b.empty()) return {};
  return mul_truncated(a, b, a.size() + b.size() - 1, q);
}

Poly scale(const Poly& a, u64 c, u64 q) {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = modarith::mul(a[i], c, q);
  return r;
}

Poly from_signed(const std::vector<i64>& coeffs, u64 q) {
  Poly r(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) r[i] = modarith::reduce(coeffs[i], q);
  return r;
}

Poly reduce_coefficients(const Poly& a, u64 q_small) {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] % q_small;
  return r;
}

std::pair<Poly, Poly> divrem_monic(const Poly& f, const Poly& divisor, u64 q) {
  const int d = degree(divisor);
  if (d < 0 || divisor[static_cast<std::size_t>(d)] != 1 % q) {
    throw Error(ErrorKind::NotDistinguished, "divisor is not monic");
  }
  Poly rem = f;
  trim(rem);
  const int n = degree(rem);
  if (n < d) {
    rem.resize(static_cast<std::size_t>(d), 0);
    return {Poly{}, rem};
  }
  Poly quot(static_cast<std::size_t>(n - d + 1), 0);
  for (int k = n; k >= d; --k) {
    const u64 c = rem[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    quot[static_cast<std::size_t>(k - d)] = c;
    for (int i = 0; i < d; ++i) {
      const u64 w = divisor[static_cast<std::size_t>(i)];
      if (w == 0) continue;
      auto& slot = rem[static_cast<std::size_t>(k - d + i)];
      slot = modarith::sub(slot, modarith::mul(c, w, q), q);
    }
    rem[static_cast<std::size_t>(k)] = 0;
  }
  rem.resize(static_cast<std::size_t>(d), 0);
  return {quot, rem};
}

Poly rem_monic(const Poly& f, const Poly& divisor, u64 q) { return divrem_monic(f, divisor, q).second; }

Poly series_inverse(const Poly& f, std::size_t length, u64 q) {
  if (f.empty()) throw Error(ErrorKind::NonUnit, "inverse of zero series");
  const auto inv0 = modarith::inverse(f[0], q);
  if (!inv0) throw Error(ErrorKind::NonUnit, "constant term is not a unit");
  Poly g(length, 0);
  if (length == 0) return g;
  g[0] = *inv0;
  for (std::size_t k = 1; k < length; ++k) {
    u128 acc = 0;
    const std::size_t imax = std::min(k, f.size() - 1);
    for (std::size_t i = 1; i <= imax; ++i) {
      acc = (acc + static_cast<u128>(f[i]) * g[k - i]) % q;
    }
    g[k] = modarith::mul(modarith::neg(static_cast<u64>(acc), q), *inv0, q);
  }
  return g;
}

int content_valuation(const Poly& f, u32 p, int cap) noexcept {
  int v = cap;
  for (u64 c : f) {
    if (c != 0) v = std::min(v, modarith::valuation(c, p, cap));
  }
  return v;
}

Poly one_plus_x_power(u64 n, u64 q) {
  // Pascal's rule row by row keeps everything exact mod q without needing
  // inverses of k (which are not units when p | k).
  Poly row(n + 1, 0);
  row[0] = 1 % q;
  for (u64 r = 1; r <= n; ++r) {
    for (u64 k = r; k >= 1; --k) row[k] = modarith::add(row[k], row[k - 1], q);
  }
  return row;
}

Poly omega(u32 p, int n, u64 q) {
  u64 pn = 1;
  for (int i = 0; i < n; ++i) pn *= p;
  Poly w = one_plus_x_power(pn, q);
  w[0] = modarith::sub(w[0], 1 % q, q);
  return w;
}

Poly cyclotomic(u32 p, int n, u64 q) {
  if (n == 0) return Poly{0, 1 % q};
  const auto [quot, rem] = divrem_monic(omega(p, n, q), omega(p, n - 1, q), q);
  return quot;
}

Poly phi_parity_product(u32 p, int n, int parity, u64 q) {
  Poly r{1 % q};
  for (int i = 1; i <= n; ++i) {
    if (i % 2 == parity) r = mul(r, cyclotomic(p, i, q), q);
  }
  return r;
}

Poly omega_parity(u32 p, int n, int parity, u64 q) {
  return mul(Poly{0, 1 % q}, phi_parity_product(p, n, parity, q), q);
}

}  // namespace iwasawa::poly
