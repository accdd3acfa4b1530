#include "iwasawa/curve.hpp"

#include "iwasawa/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

namespace iwasawa {

namespace {

using nlohmann::json;

i64 require_int(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing field '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number_integer()) {
    throw Error(ErrorKind::ParseError, std::string("field '") + key + "' must be an integer");
  }
  return v.get<i64>();
}

std::vector<u32> primes_up_to(u64 n) {
  std::vector<u32> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (u64 i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<u32>(i));
    for (u64 j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

// -sum_x chi(f(x)) with f(x) = 4x^3 + b2 x^2 + 2 b4 x + b6, for odd ell;
// works for any model, good or bad at ell.
i64 trace_by_counting(const CurveInvariants& inv, u32 ell) {
  if (ell == 2) return 0;  // handled by the caller
  const u64 l = ell;
  std::vector<signed char> chi(l, -1);
  chi[0] = 0;
  for (u64 x = 1; x <= l / 2; ++x) chi[x * x % l] = 1;
  auto red = [l](i128 v) {
    i128 r = v % static_cast<i128>(l);
    return static_cast<u64>(r < 0 ? r + l : r);
  };
  // Forward differences of the cubic at x = 0: f(0), f(1)-f(0), second and
  // third differences.
  const u64 c3 = 4 % l, c2 = red(inv.b2), c1 = red(2 * inv.b4), c0 = red(inv.b6);
  auto f = [&](u64 x) {
    return (((c3 * x % l + c2) % l * x % l + c1) % l * x % l + c0) % l;
  };
  u64 v = f(0);
  u64 d1 = (f(1) + l - f(0)) % l;
  u64 d2 = (f(2) + l - 2 * f(1) % l + f(0)) % l;
  const u64 d3 = 24 % l;
  i64 sum = 0;
  for (u64 x = 0; x < l; ++x) {
    sum += chi[v];
    v += d1;
    if (v >= l) v -= l;
    d1 += d2;
    if (d1 >= l) d1 -= l;
    d2 += d3;
    if (d2 >= l) d2 -= l;
  }
  return -sum;
}

i64 trace_at_two(const CurveData& e) {
  int affine = 0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const i64 lhs = y * y + e.a[0] * x * y + e.a[2] * y;
      const i64 rhs = x * x * x + e.a[1] * x * x + e.a[3] * x + e.a[4];
      if (((lhs - rhs) % 2 + 2) % 2 == 0) ++affine;
    }
  }
  return 2 + 1 - (affine + 1);
}

i64 bad_trace(const LocalReduction& local) {
  if (!local.multiplicative) return 0;
  return local.split ? 1 : -1;
}

i64 good_trace(const CurveData& e, const CurveInvariants& inv, u32 ell) {
  return ell == 2 ? trace_at_two(e) : trace_by_counting(inv, ell);
}

// Real roots of 4x^3 + b2 x^2 + 2 b4 x + b6, polished by Newton in Real.
std::vector<Real> real_roots(const CurveInvariants& inv) {
  const double A = 4, B = static_cast<double>(inv.b2), C = 2 * static_cast<double>(inv.b4),
               D = static_cast<double>(inv.b6);
  // Depressed cubic t^3 + pt + q with x = t - B/(3A).
  const double a = B / A, b = C / A, c = D / A;
  const double p = b - a * a / 3, q = 2 * a * a * a / 27 - a * b / 3 + c;
  const double disc = q * q / 4 + p * p * p / 27;
  std::vector<double> guesses;
  if (disc < 0) {
    const double r = std::sqrt(-p * p * p / 27);
    const double phi = std::acos(std::clamp(-q / (2 * r), -1.0, 1.0));
    const double m = 2 * std::cbrt(r);
    for (int k = 0; k < 3; ++k) guesses.push_back(m * std::cos((phi + 2 * M_PI * k) / 3) - a / 3);
  } else {
    const double s = std::sqrt(disc);
    guesses.push_back(std::cbrt(-q / 2 + s) + std::cbrt(-q / 2 - s) - a / 3);
  }
  std::vector<Real> roots;
  const Real rA = 4, rB = Real(static_cast<long long>(inv.b2)),
             rC = Real(static_cast<long long>(2 * inv.b4)),
             rD = Real(static_cast<long long>(inv.b6));
  const Real tol = pow(Real(10), -static_cast<int>(Real::default_precision()) + 3);
  for (double g : guesses) {
    Real x = g;
    for (int it = 0; it < 200; ++it) {
      const Real fx = ((rA * x + rB) * x + rC) * x + rD;
      const Real dfx = (3 * rA * x + 2 * rB) * x + rC;
      const Real step = fx / dfx;
      x -= step;
      if (abs(step) <= tol * (1 + abs(x))) break;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end(), [](const Real& l, const Real& r) { return l > r; });
  return roots;
}

Real agm(Real a, Real b) {
  const Real tol = pow(Real(10), -static_cast<int>(Real::default_precision()) + 2);
  for (int it = 0; it < 200; ++it) {
    const Real an = (a + b) / 2;
    const Real bn = sqrt(a * b);
    a = an;
    b = bn;
    if (abs(a - b) <= tol * a) return a;
  }
  throw Error(ErrorKind::NonConvergence, "AGM iteration did not converge");
}

}  // namespace

CurveInvariants invariants(const CurveData& e) {
  const i128 a1 = e.a[0], a2 = e.a[1], a3 = e.a[2], a4 = e.a[3], a6 = e.a[4];
  CurveInvariants inv{};
  inv.b2 = a1 * a1 + 4 * a2;
  inv.b4 = 2 * a4 + a1 * a3;
  inv.b6 = a3 * a3 + 4 * a6;
  inv.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  inv.c4 = inv.b2 * inv.b2 - 24 * inv.b4;
  inv.c6 = -inv.b2 * inv.b2 * inv.b2 + 36 * inv.b2 * inv.b4 - 216 * inv.b6;
  inv.discriminant = -inv.b2 * inv.b2 * inv.b8 - 8 * inv.b4 * inv.b4 * inv.b4 -
                     27 * inv.b6 * inv.b6 + 9 * inv.b2 * inv.b4 * inv.b6;
  return inv;
}

CurveData parse_curve(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& ex) {
    throw Error(ErrorKind::ParseError, ex.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "curve file must hold a JSON object");
  CurveData e;
  if (!j.contains("label") || !j.at("label").is_string()) {
    throw Error(ErrorKind::ParseError, "missing string field 'label'");
  }
  e.label = j.at("label").get<std::string>();
  if (!j.contains("a_invariants") || !j.at("a_invariants").is_array() ||
      j.at("a_invariants").size() != 5) {
    throw Error(ErrorKind::ParseError, "'a_invariants' must be a list of five integers");
  }
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& v = j.at("a_invariants").at(i);
    if (!v.is_number_integer()) throw Error(ErrorKind::ParseError, "non-integer a-invariant");
    e.a[i] = v.get<i64>();
  }
  e.conductor = require_int(j, "conductor");
  if (e.conductor < 1) throw Error(ErrorKind::ParseError, "conductor must be positive");
  e.rank = static_cast<int>(require_int(j, "rank"));
  if (e.rank < 0) throw Error(ErrorKind::ParseError, "rank must be non-negative");
  if (j.contains("e_sequence")) {
    const auto& s = j.at("e_sequence");
    if (!s.is_array() || s.empty()) throw Error(ErrorKind::ParseError, "'e_sequence' must be a non-empty list");
    for (const auto& v : s) {
      if (!v.is_number_integer() || v.get<i64>() < 0) {
        throw Error(ErrorKind::ParseError, "'e_sequence' entries must be non-negative integers");
      }
      e.e_sequence.e.push_back(v.get<int>());
    }
    if (e.e_sequence.e.front() != e.rank) {
      throw Error(ErrorKind::ParseError, "e_sequence[0] must equal the rank");
    }
  } else {
    e.e_sequence.e = {e.rank};
  }
  e.fricke_sign = static_cast<int>(require_int(j, "fricke_sign"));
  if (e.fricke_sign != 1 && e.fricke_sign != -1) {
    throw Error(ErrorKind::ParseError, "'fricke_sign' must be +1 or -1");
  }
  e.torsion_bound = j.contains("torsion_bound") ? static_cast<int>(require_int(j, "torsion_bound")) : 1;
  if (e.torsion_bound < 1) throw Error(ErrorKind::ParseError, "'torsion_bound' must be positive");
  if (j.contains("periods")) {
    const auto& pj = j.at("periods");
    if (!pj.is_object() || !pj.contains("omega_plus") || !pj.contains("omega_minus") ||
        !pj.at("omega_plus").is_number() || !pj.at("omega_minus").is_number()) {
      throw Error(ErrorKind::ParseError, "'periods' needs numeric omega_plus and omega_minus");
    }
    e.periods = PeriodData{pj.at("omega_plus").get<double>(), pj.at("omega_minus").get<double>()};
    if (e.periods->omega_plus <= 0 || e.periods->omega_minus <= 0) {
      throw Error(ErrorKind::ParseError, "periods must be positive");
    }
  }
  if (invariants(e).discriminant == 0) {
    throw Error(ErrorKind::SingularCurve, e.label + " has zero discriminant");
  }
  return e;
}

CurveData ingest_curve(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  CurveData e = parse_curve(buf.str());
  const i64 n = conductor_via_tate(e);
  if (n != e.conductor) {
    throw Error(ErrorKind::ConductorMismatch, e.label + ": file says " + std::to_string(e.conductor) +
                                                  ", Tate's algorithm gives " + std::to_string(n));
  }
  return e;
}

i64 a_ell(const CurveData& e, u32 ell) {
  if (e.conductor % ell == 0) {
    throw Error(ErrorKind::BadReduction, e.label + " has bad reduction at " + std::to_string(ell));
  }
  return good_trace(e, invariants(e), ell);
}

std::vector<i64> an_expansion(const CurveData& e, u64 nmax, unsigned threads) {
  std::vector<i64> an(nmax + 1, 0);
  if (nmax == 0) return an;
  an[1] = 1;
  const auto primes = primes_up_to(nmax);
  const auto inv = invariants(e);
  std::vector<i64> ap(primes.size(), 0);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, primes.size() / 64)));
  auto work = [&](unsigned id) {
    // Strided so every thread gets a mix of small and large primes.
    for (std::size_t i = id; i < primes.size(); i += threads) {
      const u32 l = primes[i];
      ap[i] = e.conductor % l == 0 ? bad_trace(tate(e, l)) : good_trace(e, inv, l);
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  // Prime powers, then multiplicativity via the smallest prime factor.
  std::vector<u32> spf(nmax + 1, 0);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const u64 l = primes[i];
    for (u64 j = l; j <= nmax; j += l) {
      if (spf[j] == 0) spf[j] = static_cast<u32>(l);
    }
    const bool good = e.conductor % static_cast<i64>(l) != 0;
    i64 prev2 = 1, prev = ap[i];
    an[l] = prev;
    for (u64 pk = l; pk <= nmax / l;) {
      pk *= l;
      const i64 next = good ? ap[i] * prev - static_cast<i64>(l) * prev2 : ap[i] * prev;
      an[pk] = next;
      prev2 = prev;
      prev = next;
    }
  }
  for (u64 n = 2; n <= nmax; ++n) {
    const u64 l = spf[n];
    u64 pk = l, m = n / l;
    while (m % l == 0) {
      m /= l;
      pk *= l;
    }
    if (m > 1) an[n] = an[pk] * an[m];
  }
  return an;
}

std::string_view to_string(ReductionKind kind) noexcept {
  switch (kind) {
    case ReductionKind::good_ordinary:
      return "good-ordinary";
    case ReductionKind::good_supersingular:
      return "good-supersingular";
    case ReductionKind::multiplicative:
      return "multiplicative";
    case ReductionKind::additive:
      return "additive";
  }
  return "unknown";
}

ReductionInfo classify_reduction(const CurveData& e, u32 p) {
  ReductionInfo info;
  if (e.conductor % p == 0) {
    const auto local = tate(e, p);
    info.kind = local.multiplicative ? ReductionKind::multiplicative : ReductionKind::additive;
    info.split = local.split;
    info.a_p = bad_trace(local);
  } else {
    info.a_p = a_ell(e, p);
    info.kind = info.a_p % static_cast<i64>(p) == 0 ? ReductionKind::good_supersingular
                                                    : ReductionKind::good_ordinary;
  }
  info.a_p_valuation = info.a_p == 0 ? 64 : modarith::valuation(static_cast<i128>(info.a_p), p);
  return info;
}

Periods periods(const CurveData& e, unsigned digits) {
  if (digits < 15) throw Error(ErrorKind::NonConvergence, "periods need at least 15 digits");
  PrecisionScope scope(digits + 10);
  const auto inv = invariants(e);
  const auto roots = real_roots(inv);
  const Real pi_ = pi();
  Periods out;
  if (inv.discriminant > 0) {
    if (roots.size() != 3) throw Error(ErrorKind::NonConvergence, "expected three real roots");
    const Real& e1 = roots[0];
    const Real& e2 = roots[1];
    const Real& e3 = roots[2];
    out.omega1 = pi_ / agm(sqrt(e1 - e3), sqrt(e1 - e2));
    out.omega2_imag = pi_ / agm(sqrt(e1 - e3), sqrt(e2 - e3));
    out.real_components = 2;
  } else {
    const Real& e1 = roots.front();
    const Real b2 = Real(static_cast<long long>(inv.b2));
    const Real b4 = Real(static_cast<long long>(inv.b4));
    const Real a = 3 * e1 + b2 / 4;
    const Real b = sqrt(3 * e1 * e1 + (b2 / 2) * e1 + b4 / 2);
    out.omega1 = 2 * pi_ / agm(2 * sqrt(b), sqrt(2 * b + a));
    out.omega2_imag = pi_ / agm(2 * sqrt(b), sqrt(2 * b - a));
    out.real_components = 1;
  }
  out.omega_plus = out.omega1 * out.real_components;
  out.omega_minus = 2 * out.omega2_imag;
  return out;
}

double check_root_number(const CurveData& e, const std::vector<i64>& an, unsigned digits) {
  PrecisionScope scope(digits + 10);
  const Real sqrtN = sqrt(Real(e.conductor));
  const Real t = Real(6) / (5 * sqrtN);           // off the fixed point 1/sqrt(N)
  const Real t_dual = 1 / (Real(e.conductor) * t);  // smaller of the two heights
  const Real two_pi = 2 * pi();
  const double height = static_cast<double>(t_dual);
  const u64 terms = static_cast<u64>(std::ceil((digits + 5) * std::log(10.0) / (2 * M_PI * height))) + 10;
  if (an.size() <= terms) {
    throw Error(ErrorKind::CoefficientSupplyExhausted,
                "root number check needs " + std::to_string(terms) + " coefficients");
  }
  auto series = [&](const Real& y) {
    const Real r = exp(-two_pi * y);
    Real power = r, sum = 0;
    for (u64 n = 1; n <= terms; ++n) {
      if (an[n] != 0) sum += power * static_cast<long long>(an[n]);
      power *= r;
    }
    return sum;
  };
  const Real lhs = series(t_dual);
  const Real rhs_unsigned = Real(e.conductor) * t * t * series(t);
  const Real err = abs(lhs - e.fricke_sign * rhs_unsigned) / abs(lhs);
  const Real err_flipped = abs(lhs + e.fricke_sign * rhs_unsigned) / abs(lhs);
  const Real tol = pow(Real(10), -static_cast<int>(digits) + 5);
  if (!(err < tol) || err_flipped < tol) {
    std::ostringstream os;
    os << e.label << ": functional equation with sign " << e.fricke_sign
       << " fails (relative error " << static_cast<double>(err) << ")";
    throw Error(ErrorKind::RootNumberMismatch, os.str());
  }
  return static_cast<double>(err);
}

}  // namespace iwasawa
