#pragma once

#include "iwasawa/lambda_ring.hpp"
#include "iwasawa/modsym.hpp"

#include <map>
#include <string>

namespace iwasawa {

/// a = omega(a) * gamma^j modulo p^{n+1}, with gamma = 1 + p and omega(a) a
/// (p-1)-th root of unity. `teich_index` is i with omega(a) = omega(g)^i for
/// the least primitive root g mod p.
struct UnitDecomposition {
  u64 teichmuller = 1;
  int teich_index = 0;
  u64 exponent = 0;  // j mod p^n
};

UnitDecomposition decompose_unit(i64 a, u32 p, int n);

/// theta_n = sum_j c_j (1+X)^j in Lambda/(p^M, omega_n), with
/// c_j = sum over Teichmuller values t of [t gamma^j / p^{n+1}]^+.
struct ThetaElement {
  int level;
  LambdaElement body;
  std::string source;  // label of the table it came from
};

/// Needs the table through level n+1. NotIntegral when a coefficient is not
/// p-integral.
ThetaElement build_theta(const SymbolTable& table, int n, int precision);

/// Levels 0..max_level keyed by n.
using ThetaFamily = std::map<int, ThetaElement>;
ThetaFamily build_thetas(const SymbolTable& table, int max_level, int precision);

/// pi(theta_n) - a_p theta_{n-1} - sign * Phi_{n-1} theta_{n-2} in
/// Lambda/omega_{n-1}. The relation that holds has sign = -1.
LambdaElement compat_defect(const ThetaFamily& thetas, int n, i64 a_p, int sign = -1);

struct CompatReport {
  int level = 0;
  int precision = 0;
};

/// Checks pi(theta_n) = a_p theta_{n-1} - Phi_{n-1} theta_{n-2} for n >= 2.
/// Throws CompatFailed naming the first offending coefficient.
CompatReport check_compat(const ThetaFamily& thetas, int n, i64 a_p);

}  // namespace iwasawa
