#pragma once

#include "iwasawa/mazur_tate.hpp"

#include <optional>
#include <string>
#include <vector>

namespace iwasawa {

enum class SignedKind { plus_minus, sharp_flat };
enum class ExtractionMethod { parity_factor, linear_system, invariant_fit };

std::string_view to_string(SignedKind kind) noexcept;
std::string_view to_string(ExtractionMethod method) noexcept;

struct SignedSeries {
  std::string label;  // "+", "-", "sharp" or "flat"
  int level;          // the theta level the series was read from
  LambdaElement series;
  InvariantReport invariants;
};

/// Fitted invariants of one parity class of theta levels.
struct ParityFit {
  int parity = 0;
  std::optional<int> mu;
  std::optional<int> lambda;
  std::vector<int> levels;  // levels with conclusive invariants
  bool conclusive() const noexcept { return mu.has_value() && lambda.has_value(); }
};

struct SignedPair {
  SignedKind kind = SignedKind::plus_minus;
  ExtractionMethod method = ExtractionMethod::parity_factor;
  std::vector<SignedSeries> series;  // always two entries
  bool stabilized = false;           // both series conclusive
  std::vector<ParityFit> fit;        // the invariant fit run alongside
  std::optional<bool> fit_agrees;    // set when both methods are conclusive
};

/// Total degree of prod Phi_i over 1 <= i <= n-1 with i = n-1 mod 2, the
/// factor by which theta_n exceeds the signed series of its parity.
u64 parity_product_degree(u32 p, int n);

/// a_p = 0. The signed series of parity n mod 2 is theta_n divided by that
/// product, in Lambda/omega_n^{parity}. Even levels give "+", odd levels "-".
/// Throws WrongReductionType, NotStabilized (neither series conclusive) or
/// CompatFailed (theta_n not divisible by its parity product).
SignedPair extract_plus_minus(const ThetaFamily& thetas, i64 a_p);

/// p | a_p, a_p != 0. Solves A u_N + B v_N = theta_N (mod omega_N) and
/// A u_{N-1} + B v_{N-1} = theta_{N-1} (mod omega_{N-1}) over Z/p^M, where u, v
/// are the solutions of s_{k+1} = a_p s_k - Phi_k s_{k-1} with (s_0, s_1) =
/// (1, 0) and (0, 1). A is reported as "sharp", B as "flat". Throws
/// WrongReductionType, SingularSystem or NotStabilized.
SignedPair extract_sharp_flat(const ThetaFamily& thetas, i64 a_p);

/// Chooses plus/minus or sharp/flat from a_p; WrongReductionType when p does
/// not divide a_p.
SignedPair extract_signed(const ThetaFamily& thetas, i64 a_p);

/// mu(theta_n) and lambda(theta_n) - parity_product_degree(n) for each level,
/// grouped by parity; levels of one parity must agree. Throws NotStabilized
/// on disagreement or when no level is conclusive.
std::vector<ParityFit> invariant_fit(const ThetaFamily& thetas);

}  // namespace iwasawa
