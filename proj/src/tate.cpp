// Tate's algorithm for the local reduction data of a Weierstrass model,
// following the standard step numbering (Cohen, Algorithm 7.5.1). Roots of
// auxiliary polynomials mod p are found by brute force, which is fine for the
// primes dividing small discriminants.

#include "iwasawa/curve.hpp"
#include "iwasawa/error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace iwasawa {

namespace {

using Int = boost::multiprecision::cpp_int;

struct Model {
  Int a1, a2, a3, a4, a6;

  Int b2() const { return a1 * a1 + 4 * a2; }
  Int b4() const { return 2 * a4 + a1 * a3; }
  Int b6() const { return a3 * a3 + 4 * a6; }
  Int b8() const { return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4; }
  Int c4() const { return b2() * b2() - 24 * b4(); }
  Int c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }
  Int disc() const {
    const Int B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
  }

  // x = x' + r, y = y' + s x' + t.
  void transform(const Int& r, const Int& s, const Int& t) {
    const Int n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
    const Int n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
    const Int n3 = a3 + r * a1 + 2 * t;
    const Int n2 = a2 - s * a1 + 3 * r - s * s;
    const Int n1 = a1 + 2 * s;
    a1 = n1;
    a2 = n2;
    a3 = n3;
    a4 = n4;
    a6 = n6;
  }
};

Int mod(const Int& x, const Int& m) {
  Int r = x % m;
  if (r < 0) r += m;
  return r;
}

int val(Int x, u32 p) {
  if (x == 0) return 1000;
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

bool divides(u64 pk, const Int& x) { return x % pk == 0; }

Int inverse_mod(const Int& a, u32 p) {
  const auto inv = modarith::inverse(static_cast<u64>(mod(a, p)), p);
  if (!inv) throw Error(ErrorKind::NonUnit, "not invertible mod p");
  return Int(*inv);
}

// Roots in F_p of c2 x^2 + c1 x + c0.
std::vector<u32> quadratic_roots(const Int& c2, const Int& c1, const Int& c0, u32 p) {
  std::vector<u32> roots;
  const Int A = mod(c2, p), B = mod(c1, p), C = mod(c0, p);
  for (u32 x = 0; x < p; ++x) {
    if (mod(A * x * x + B * x + C, p) == 0) roots.push_back(x);
  }
  return roots;
}

}  // namespace

LocalReduction tate(const CurveData& e, u32 p) {
  Model m{e.a[0], e.a[1], e.a[2], e.a[3], e.a[4]};
  const u64 p2 = u64{p} * p, p3 = p2 * p, p4 = p3 * p, p6 = p4 * p2;
  LocalReduction out;
  for (int guard = 0; guard < 20; ++guard) {
    const Int D = m.disc();
    if (D == 0) throw Error(ErrorKind::SingularCurve, e.label + " has zero discriminant");
    const int n = val(D, p);
    out.discriminant_valuation = n;
    if (n == 0) {
      out.kodaira = "I0";
      out.conductor_exponent = 0;
      return out;
    }

    // Step 3: move the singular point to (0, 0).
    Int r, t;
    if (p == 2) {
      if (divides(2, m.b2())) {
        r = mod(m.a4, 2);
        t = mod(r * (1 + m.a2 + m.a4) + m.a6, 2);
      } else {
        r = mod(m.a3, 2);
        t = mod(r + m.a4, 2);
      }
    } else if (p == 3) {
      r = divides(3, m.b2()) ? mod(-m.b6(), 3) : mod(-m.b2() * m.b4(), 3);
      t = mod(m.a1 * r + m.a3, 3);
    } else {
      if (divides(p, m.c4())) {
        r = mod(-inverse_mod(12, p) * m.b2(), p);
      } else {
        r = mod(-inverse_mod(12 * m.c4(), p) * (m.c6() + m.b2() * m.c4()), p);
      }
      t = mod(-inverse_mod(2, p) * (m.a1 * r + m.a3), p);
    }
    m.transform(r, 0, t);

    // Step 4: multiplicative reduction.
    if (!divides(p, m.c4())) {
      out.kodaira = "I" + std::to_string(n);
      out.conductor_exponent = 1;
      out.multiplicative = true;
      out.split = !quadratic_roots(1, m.a1, -m.a2, p).empty();
      return out;
    }
    // Step 5: types II, III, IV.
    if (!divides(p2, m.a6)) {
      out.kodaira = "II";
      out.conductor_exponent = n;
      return out;
    }
    if (!divides(p3, m.b8())) {
      out.kodaira = "III";
      out.conductor_exponent = n - 1;
      return out;
    }
    if (!divides(p3, m.b6())) {
      out.kodaira = "IV";
      out.conductor_exponent = n - 2;
      return out;
    }

    // Step 6: make p | a1, a2; p^2 | a3, a4; p^3 | a6.
    Int s;
    if (p == 2) {
      s = mod(m.a2, 2);
      t = 2 * mod(m.a6 / 4, 2);
    } else {
      s = mod(-m.a1 * inverse_mod(2, p), p);
      t = mod(-m.a3 * Int(*modarith::inverse(2, p2)), Int(p2));
    }
    m.transform(0, s, t);

    // Step 7: the cubic T^3 + b T^2 + c T + d.
    const Int b = m.a2 / p, c = m.a4 / p2, d = m.a6 / p3;
    const Int w = 27 * d * d - b * b * c * c + 4 * b * b * b * d - 18 * b * c * d + 4 * c * c * c;
    const Int x = 3 * c - b * b;
    if (!divides(p, w)) {
      out.kodaira = "I0*";
      out.conductor_exponent = n - 4;
      return out;
    }
    auto cubic_at = [&](const Int& v) { return mod(v * v * v + b * v * v + c * v + d, p); };
    auto cubic_deriv_at = [&](const Int& v) { return mod(3 * v * v + 2 * b * v + c, p); };
    if (!divides(p, x)) {
      // Step 8: one double root; move it to 0 and peel off the I_m* chain.
      Int alpha = -1;
      for (u32 v = 0; v < p; ++v) {
        if (cubic_at(v) == 0 && cubic_deriv_at(v) == 0) {
          alpha = v;
          break;
        }
      }
      if (alpha < 0) throw Error(ErrorKind::NonConvergence, "double root not found");
      m.transform(alpha * p, 0, 0);
      int ix = 3, iy = 3;
      Int mx = p2, my = p2;
      for (int step = 0; step < 200; ++step) {
        Int xa3 = m.a3 / my, xa6 = m.a6 / (mx * my);
        if (!divides(p, xa3 * xa3 + 4 * xa6)) break;
        const auto ry = quadratic_roots(1, xa3, -xa6, p);
        m.transform(0, 0, my * ry.at(0));
        my *= p;
        ++iy;
        const Int xa2 = m.a2 / p, xa4 = m.a4 / (p * mx);
        xa6 = m.a6 / (mx * my);
        if (!divides(p, xa4 * xa4 - 4 * xa2 * xa6)) break;
        const auto rx = quadratic_roots(xa2, xa4, xa6, p);
        m.transform(mx * rx.at(0), 0, 0);
        mx *= p;
        ++ix;
      }
      const int mm = ix + iy - 5;
      out.kodaira = "I" + std::to_string(mm) + "*";
      out.conductor_exponent = n - mm - 4;
      return out;
    }
    // Triple root: move it to 0.
    Int alpha = -1;
    for (u32 v = 0; v < p; ++v) {
      if (cubic_at(v) == 0) {
        alpha = v;
        break;
      }
    }
    if (alpha < 0) throw Error(ErrorKind::NonConvergence, "triple root not found");
    m.transform(alpha * p, 0, 0);
    // Step 9: IV*.
    const Int x3 = m.a3 / p2, x6 = m.a6 / p4;
    if (!divides(p, x3 * x3 + 4 * x6)) {
      out.kodaira = "IV*";
      out.conductor_exponent = n - 6;
      return out;
    }
    const auto ry = quadratic_roots(1, x3, -x6, p);
    m.transform(0, 0, Int(p2) * ry.at(0));
    // Steps 10, 11: III* and II*.
    if (!divides(p4, m.a4)) {
      out.kodaira = "III*";
      out.conductor_exponent = n - 7;
      return out;
    }
    if (!divides(p6, m.a6)) {
      out.kodaira = "II*";
      out.conductor_exponent = n - 8;
      return out;
    }
    // Non-minimal model: scale by p and start over.
    m.a1 /= p;
    m.a2 /= p2;
    m.a3 /= p3;
    m.a4 /= p4;
    m.a6 /= p6;
  }
  throw Error(ErrorKind::NonConvergence, "Tate's algorithm did not terminate");
}

i64 conductor_via_tate(const CurveData& e) {
  const auto inv = invariants(e);
  i128 d = inv.discriminant < 0 ? -inv.discriminant : inv.discriminant;
  std::vector<u64> primes;
  for (u64 q = 2; static_cast<i128>(q) * q <= d; ++q) {
    if (d % q != 0) continue;
    primes.push_back(q);
    while (d % q == 0) d /= q;
  }
  if (d > 1) primes.push_back(static_cast<u64>(d));
  i64 n = 1;
  for (u64 q : primes) {
    const int f = tate(e, static_cast<u32>(q)).conductor_exponent;
    for (int i = 0; i < f; ++i) n *= static_cast<i64>(q);
  }
  return n;
}

}  // namespace iwasawa
