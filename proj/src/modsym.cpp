#include "iwasawa/modsym.hpp"
#include "iwasawa/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace iwasawa {

namespace {

std::string rational_text(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

i64 power(u32 p, int k) {
  i64 m = 1;
  for (int i = 0; i < k; ++i) m *= p;
  return m;
}

i64 mod_floor(i64 a, i64 m) {
  const i64 r = a % m;
  return r < 0 ? r + m : r;
}

// Height t of the split point and the number of terms after which the tail
// sum_{n>K} 2 r^n (r = e^{-2 pi t}) drops below 10^-digits / 8. |a_n|/n <= 2
// because |a_n| <= d(n) sqrt(n) and d(n) <= 2 sqrt(n).
u64 terms_for(double t, unsigned digits) {
  const double decay = 2 * M_PI * t;
  const double one_minus_r = -std::expm1(-decay);
  const double needed = std::log(16.0 / one_minus_r) + digits * std::log(10.0);
  return static_cast<u64>(std::ceil(needed / decay)) + 1;
}

double tail_bound(double t, u64 terms) {
  const double decay = 2 * M_PI * t;
  return 2 * std::exp(-decay * static_cast<double>(terms + 1)) / -std::expm1(-decay);
}

unsigned working_digits(unsigned digits, u64 terms) {
  return digits + 10 + static_cast<unsigned>(std::ceil(std::log10(static_cast<double>(terms) + 1)));
}

std::vector<Complex> roots_of_unity(u64 m) {
  std::vector<Complex> roots;
  roots.reserve(m);
  for (u64 e = 0; e < m; ++e) roots.push_back(unit_circle(Real(e) / Real(m)));
  return roots;
}

// out[b] = sum_j x[j] zeta^{b j stride}, where zeta is a primitive root of
// order roots.size() and x.size() is a power of p. Cooley-Tukey on the
// residue of j mod p.
std::vector<Complex> dft(const std::vector<Complex>& x, u32 p, const std::vector<Complex>& roots,
                         u64 stride) {
  const u64 n = x.size();
  if (n == 1) return x;
  const u64 sub = n / p;
  const u64 m = roots.size();
  std::vector<std::vector<Complex>> parts(p);
  for (u32 t = 0; t < p; ++t) {
    parts[t].reserve(sub);
    for (u64 j = 0; j < sub; ++j) parts[t].push_back(x[j * p + t]);
    parts[t] = dft(parts[t], p, roots, stride * p);
  }
  std::vector<Complex> out(n);
  for (u64 b = 0; b < n; ++b) {
    Complex acc = parts[0][b % sub];
    for (u32 t = 1; t < p; ++t) {
      acc += roots[(b * t * stride) % m] * parts[t][b % sub];
    }
    out[b] = acc;
  }
  return out;
}

i64 fricke_epsilon(const CurveData& e) { return -e.fricke_sign; }

i64 inverse_mod(i64 a, i64 m) {
  if (m == 1) return 0;
  const auto inv = modarith::inverse(static_cast<u64>(mod_floor(a, m)), static_cast<u64>(m));
  if (!inv) throw Error(ErrorKind::NotAUnit, std::to_string(a) + " is not invertible mod " + std::to_string(m));
  return static_cast<i64>(*inv);
}

}  // namespace

AnSupply::AnSupply(CurveData curve, u64 limit) : curve_(std::move(curve)), limit_(limit) {}

const std::vector<i64>& AnSupply::at_least(u64 count) {
  if (count > limit_) {
    throw Error(ErrorKind::CoefficientSupplyExhausted,
                std::to_string(count) + " coefficients requested, limit " + std::to_string(limit_));
  }
  if (count > available()) {
    const u64 target = std::min(limit_, std::max(count, 2 * available()));
    an_ = an_expansion(curve_, target);
  }
  return an_;
}

PeriodIntegral period_integral(AnSupply& supply, i64 a, i64 m, unsigned digits, double height_factor) {
  const CurveData& e = supply.curve();
  if (m < 1) throw Error(ErrorKind::Usage, "denominator must be positive");
  if (std::gcd(m, e.conductor) != 1) throw Error(ErrorKind::BadReduction, "denominator shares a factor with N");
  a = mod_floor(a, m);
  if (std::gcd(a, m) != 1) throw Error(ErrorKind::NotAUnit, "cusp a/m is not in lowest terms");
  const i64 zbar = inverse_mod(mod_floor(a * mod_floor(e.conductor, m), m), m);

  const double sqrt_n = std::sqrt(static_cast<double>(e.conductor));
  const double t_top = height_factor / (static_cast<double>(m) * sqrt_n);
  const double t_low = 1.0 / (height_factor * static_cast<double>(m) * sqrt_n);
  const u64 k_top = terms_for(t_top, digits), k_low = terms_for(t_low, digits);
  const u64 terms = std::max(k_top, k_low);
  const auto& an = supply.at_least(terms);

  PrecisionScope scope(working_digits(digits, terms));
  const auto roots = roots_of_unity(static_cast<u64>(m));
  const Real sqrt_nr = boost::multiprecision::sqrt(Real(e.conductor));
  const Real r_top = boost::multiprecision::exp(-2 * pi() * Real(height_factor) / (Real(m) * sqrt_nr));
  const Real r_low = boost::multiprecision::exp(-2 * pi() / (Real(height_factor) * Real(m) * sqrt_nr));

  auto tail_sum = [&](const Real& r, u64 count, i64 shift) {
    Complex sum;
    Real rn = 1;
    for (u64 n = 1; n <= count; ++n) {
      rn *= r;
      if (an[n] == 0) continue;
      const Real c = rn * Real(an[n]) / Real(n);
      sum += roots[static_cast<u64>(mod_floor(shift * static_cast<i64>(n % static_cast<u64>(m)), m))] * c;
    }
    return sum;
  };
  PeriodIntegral out;
  const Complex upper = tail_sum(r_top, k_top, a);
  const Complex lower = tail_sum(r_low, k_low, -zbar);
  out.value = upper - lower * Real(fricke_epsilon(e));
  out.terms = terms;
  out.error_bound = tail_bound(t_top, k_top) + tail_bound(t_low, k_low) +
                    static_cast<double>(terms) * std::pow(10.0, -static_cast<double>(working_digits(digits, terms) - 2));
  return out;
}

std::vector<Complex> level_integrals(AnSupply& supply, u32 p, int k, unsigned digits) {
  const CurveData& e = supply.curve();
  const i64 m = power(p, k);
  if (e.conductor % p == 0) throw Error(ErrorKind::BadReduction, "p divides the conductor");
  const double t = 1.0 / (static_cast<double>(m) * std::sqrt(static_cast<double>(e.conductor)));
  const u64 terms = terms_for(t, digits);
  const auto& an = supply.at_least(terms);

  PrecisionScope scope(working_digits(digits, terms));
  const Real r = boost::multiprecision::exp(-2 * pi() / (Real(m) * boost::multiprecision::sqrt(Real(e.conductor))));
  // Residue-class sums S_j = sum_{n = j mod m} a_n/n r^n, in ascending n.
  std::vector<Complex> classes(static_cast<std::size_t>(m));
  Real rn = 1;
  for (u64 n = 1; n <= terms; ++n) {
    rn *= r;
    if (an[n] == 0) continue;
    classes[n % static_cast<u64>(m)].re += rn * Real(an[n]) / Real(n);
  }
  const auto roots = roots_of_unity(static_cast<u64>(m));
  const std::vector<Complex> sums = dft(classes, p, roots, 1);

  const i64 nmod = mod_floor(e.conductor, m);
  const Real eps(fricke_epsilon(e));
  std::vector<Complex> out(static_cast<std::size_t>(m));
  for (i64 a = 0; a < m; ++a) {
    if (a % p == 0) continue;
    const i64 zbar = inverse_mod(a * nmod % m, m);
    out[static_cast<std::size_t>(a)] = sums[static_cast<std::size_t>(a)] - sums[static_cast<std::size_t>(mod_floor(-zbar, m))] * eps;
  }
  return out;
}

std::optional<Rational> recognize(const Real& x, i64 bound, const Real& tolerance) {
  i64 h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  Real y = x;
  for (int step = 0; step < 64; ++step) {
    const Real fl = boost::multiprecision::floor(y);
    if (boost::multiprecision::abs(fl) > Real(bound) * Real(bound) + Real(1e6)) return std::nullopt;
    const i64 digit = fl.convert_to<i64>();
    const i128 h = static_cast<i128>(digit) * h_prev + h_prev2;
    const i128 k = static_cast<i128>(digit) * k_prev + k_prev2;
    if (k > bound || h > INT64_MAX || h < INT64_MIN) return std::nullopt;
    const Real approx = Real(static_cast<i64>(h)) / Real(static_cast<i64>(k));
    if (boost::multiprecision::abs(x - approx) < tolerance) return Rational(static_cast<i64>(h), static_cast<i64>(k));
    const Real frac = y - fl;
    if (frac == 0) return std::nullopt;
    y = 1 / frac;
    h_prev2 = h_prev;
    h_prev = static_cast<i64>(h);
    k_prev2 = k_prev;
    k_prev = static_cast<i64>(k);
  }
  return std::nullopt;
}

SymbolTable::SymbolTable(std::string label, u32 p, Provenance provenance)
    : label_(std::move(label)), p_(p), provenance_(provenance) {}

void SymbolTable::set(int k, i64 a, Rational plus, Rational minus) {
  if (k < 0) throw Error(ErrorKind::Usage, "negative level");
  const i64 m = power(p_, k);
  a = mod_floor(a, m);
  if (k > 0 && a % p_ == 0) throw Error(ErrorKind::NotAUnit, "symbol key a/p^k must be in lowest terms");
  entries_[{k, a}] = ModularSymbol{a, m, plus, minus};
  max_level_ = std::max(max_level_, k);
}

bool SymbolTable::contains(int k, i64 a) const {
  if (k == 0) return entries_.contains({0, 0});
  const i64 m = power(p_, k);
  return entries_.contains({k, mod_floor(a, m)});
}

const ModularSymbol& SymbolTable::at(int k, i64 a) const {
  a = mod_floor(a, power(p_, k));
  while (k > 0 && a % p_ == 0) {
    if (a == 0) {
      k = 0;
      break;
    }
    a /= p_;
    --k;
  }
  if (k == 0) a = 0;
  const auto it = entries_.find({k, a});
  if (it == entries_.end()) {
    throw Error(ErrorKind::IncompleteTable,
                "missing [" + std::to_string(a) + "/" + std::to_string(p_) + "^" + std::to_string(k) + "]");
  }
  return it->second;
}

bool SymbolTable::complete_through(int level) const {
  if (!entries_.contains({0, 0})) return false;
  for (int k = 1; k <= level; ++k) {
    const i64 m = power(p_, k);
    for (i64 a = 1; a < m; ++a) {
      if (a % p_ != 0 && !entries_.contains({k, a})) return false;
    }
  }
  return true;
}

i64 default_denominator_bound(const CurveData& e, u32 p, int precision) {
  return static_cast<i64>(e.torsion_bound) * e.torsion_bound * 2 * power(p, (precision + 1) / 2);
}

SymbolEngine::SymbolEngine(const CurveData& curve, u32 p, SymbolOptions options)
    : curve_(curve),
      p_(p),
      options_(options),
      bound_(options.denominator_bound.value_or(default_denominator_bound(curve, p, options.precision))),
      supply_(curve, options.coefficient_limit) {
  if (curve.conductor % p == 0) throw Error(ErrorKind::BadReduction, curve.label + " has bad reduction at " + std::to_string(p));
  if (options.digits < 15) throw Error(ErrorKind::Usage, "at least 15 digits are needed");
}

const Periods& SymbolEngine::periods_at(unsigned digits) {
  auto it = periods_.find(digits);
  if (it == periods_.end()) it = periods_.emplace(digits, periods(curve_, digits + 10)).first;
  return it->second;
}

std::optional<ModularSymbol> SymbolEngine::try_recognize(i64 a, i64 m, const Complex& value, unsigned digits) {
  const Periods& per = periods_at(digits);
  PrecisionScope scope(digits + 10);
  const Real tolerance = boost::multiprecision::pow(Real(10), -static_cast<int>(digits - 4));
  const auto plus = recognize(value.re / per.omega_plus, bound_, tolerance);
  const auto minus = recognize(value.im / per.omega_minus, bound_, tolerance);
  if (!plus || !minus) return std::nullopt;
  return ModularSymbol{a, m, *plus, *minus};
}

ModularSymbol SymbolEngine::symbol(i64 a, int k) {
  const i64 m = power(p_, k);
  a = mod_floor(a, m);
  for (unsigned digits : {options_.digits, options_.digits + 20}) {
    const auto value = period_integral(supply_, a, m, digits);
    if (auto s = try_recognize(a, m, value.value, digits)) return *s;
  }
  throw Error(ErrorKind::RecognitionFailed, "[" + std::to_string(a) + "/" + std::to_string(m) +
                                                "] has no rational under the bound " + std::to_string(bound_));
}

SymbolTable SymbolEngine::table(int max_level) {
  SymbolTable table(curve_.label, p_);
  const auto zero = symbol(0, 0);
  table.set(0, 0, zero.plus, zero.minus);
  for (int k = 1; k <= max_level; ++k) {
    const i64 m = power(p_, k);
    std::vector<ModularSymbol> level;
    std::string failure;
    for (unsigned digits : {options_.digits, options_.digits + 20}) {
      level.clear();
      failure.clear();
      const auto values = level_integrals(supply_, p_, k, digits);
      for (i64 a = 1; a < m && failure.empty(); ++a) {
        if (a % p_ == 0) continue;
        if (auto s = try_recognize(a, m, values[static_cast<std::size_t>(a)], digits)) {
          level.push_back(*s);
        } else {
          failure = "[" + std::to_string(a) + "/" + std::to_string(m) + "]";
        }
      }
      if (failure.empty()) break;
    }
    if (!failure.empty()) {
      throw Error(ErrorKind::RecognitionFailed,
                  failure + " has no rational under the bound " + std::to_string(bound_));
    }
    for (const auto& s : level) table.set(k, s.a, s.plus, s.minus);
  }
  return table;
}

HeckeReport validate_hecke(const SymbolTable& table, i64 a_p, int n) {
  if (n < 0) throw Error(ErrorKind::Usage, "negative level");
  if (!table.complete_through(n + 1)) {
    throw Error(ErrorKind::IncompleteTable, "the Hecke relation at level " + std::to_string(n) +
                                                " needs every symbol through level " + std::to_string(n + 1));
  }
  const u32 p = table.prime();
  const i64 m = power(p, n);
  HeckeReport report;
  report.level = n;
  for (i64 a = 0; a < m; ++a) {
    if (n > 0 && a % p == 0) continue;
    const auto& centre = table.at(n, a);
    const auto& lower = table.at(n, a * p);
    Rational plus = lower.plus, minus = lower.minus;
    for (i64 k = 0; k < p; ++k) {
      const auto& upper = table.at(n + 1, a + k * m);
      plus += upper.plus;
      minus += upper.minus;
    }
    const Rational lhs_plus = centre.plus * a_p, lhs_minus = centre.minus * a_p;
    if (lhs_plus != plus) {
      report.violations.push_back("a=" + std::to_string(a) + " plus: lhs " + rational_text(lhs_plus) + " rhs " + rational_text(plus));
    }
    if (lhs_minus != minus) {
      report.violations.push_back("a=" + std::to_string(a) + " minus: lhs " + rational_text(lhs_minus) + " rhs " + rational_text(minus));
    }
  }
  report.passed = report.violations.empty();
  return report;
}

std::vector<std::string> check_symmetry(const SymbolTable& table) {
  std::vector<std::string> bad;
  for (const auto& [key, s] : table.entries()) {
    const auto& mirror = table.at(key.first, -s.a);
    if (mirror.plus != s.plus || mirror.minus != -s.minus) {
      bad.push_back("[" + std::to_string(s.a) + "/" + std::to_string(s.m) + "]");
    }
  }
  return bad;
}

void write_table(const SymbolTable& table, std::ostream& out) {
  out << "curve,p\n" << table.label() << ',' << table.prime() << '\n';
  out << "k,a,plus_num,plus_den,minus_num,minus_den\n";
  for (const auto& [key, s] : table.entries()) {
    out << key.first << ',' << s.a << ',' << s.plus.numerator() << ',' << s.plus.denominator() << ','
        << s.minus.numerator() << ',' << s.minus.denominator() << '\n';
  }
}

void export_table(const SymbolTable& table, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + file.string());
  write_table(table, out);
  if (!out) throw Error(ErrorKind::IoError, "write to " + file.string() + " failed");
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

i64 parse_int(const std::string& text, int line) {
  i64 value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": '" + text + "' is not an integer");
  }
  return value;
}

}  // namespace

SymbolTable import_table(const std::filesystem::path& file, const std::optional<std::string>& expected_label,
                         std::optional<u32> expected_p) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + file.string());
  std::string line;
  int number = 0;
  auto next = [&](bool required) {
    if (!std::getline(in, line)) {
      if (required) throw Error(ErrorKind::ParseError, "line " + std::to_string(number + 1) + ": unexpected end of file");
      return false;
    }
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  next(true);
  if (line != "curve,p") throw Error(ErrorKind::ParseError, "line 1: expected header 'curve,p'");
  next(true);
  auto fields = split_fields(line);
  if (fields.size() != 2 || fields[0].empty()) throw Error(ErrorKind::ParseError, "line 2: expected '<label>,<p>'");
  const i64 p = parse_int(fields[1], number);
  if (p < 3 || p % 2 == 0) throw Error(ErrorKind::ParseError, "line 2: p must be an odd prime");
  if (expected_label && *expected_label != fields[0]) {
    throw Error(ErrorKind::ContextMismatch, "table is for " + fields[0] + ", expected " + *expected_label);
  }
  if (expected_p && static_cast<i64>(*expected_p) != p) {
    throw Error(ErrorKind::ContextMismatch, "table is for p = " + fields[1] + ", expected " + std::to_string(*expected_p));
  }
  SymbolTable table(fields[0], static_cast<u32>(p), SymbolTable::Provenance::imported);
  next(true);
  if (line != "k,a,plus_num,plus_den,minus_num,minus_den") {
    throw Error(ErrorKind::ParseError, "line 3: expected the column header");
  }
  while (next(false)) {
    if (line.empty()) continue;
    fields = split_fields(line);
    if (fields.size() != 6) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(number) + ": expected 6 fields, got " + std::to_string(fields.size()));
    }
    std::array<i64, 6> v{};
    for (std::size_t i = 0; i < 6; ++i) v[i] = parse_int(fields[i], number);
    if (v[3] <= 0 || v[5] <= 0) throw Error(ErrorKind::ParseError, "line " + std::to_string(number) + ": denominators must be positive");
    if (v[0] < 0 || v[0] > 12) throw Error(ErrorKind::ParseError, "line " + std::to_string(number) + ": level out of range");
    try {
      table.set(static_cast<int>(v[0]), v[1], Rational(v[2], v[3]), Rational(v[4], v[5]));
    } catch (const Error& e) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(number) + ": " + e.what());
    }
  }
  return table;
}

}  // namespace iwasawa
