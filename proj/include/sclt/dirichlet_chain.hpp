#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sclt/kernels.hpp"
#include "sclt/number_theory.hpp"
#include "sclt/zeta_engine.hpp"

namespace sclt::chain {

inline constexpr std::uint64_t kDefaultXSquaredCap = 100'000'000ULL;

struct ClampPolicy {
  std::uint64_t x_squared_cap = kDefaultXSquaredCap;
  /// (θ_X, θ₁, θ₂): X = T^θ_X, X1 = T^θ₁, X2 = T^θ₂. Absent means the
  /// asymptotic formulas X = T^{1/(log₄T)^{1/4}}, X1 = T^{1/log₂T}, X2 = T^{1/log₃T}.
  std::optional<std::array<double, 3>> explicit_exponents;
};

struct ParameterLadder {
  double T = 0.0;
  double sigma0 = 0.0;  // 1/2 + 1/log T unless overridden
  double s_norm = 0.0;  // √(½ log log T)
  double X = 0.0;
  double X1 = 0.0;
  double X2 = 0.0;
  ClampPolicy policy;
  std::vector<std::string> clamps;  // human-readable record of applied clamps
};

/// Builds the cutoff ladder for height T; clamps X1 <= X2 <= X and X² <= cap.
/// Throws ConfigError when T < 1e3, when the asymptotic formulas are
/// undefined (T <= e^{e^e}) and no explicit exponents are given, or when
/// X1 < 2 leaves the first prime block empty.
ParameterLadder ladder_from_T(double T, const ClampPolicy& policy = {});

/// Replaces σ₀; throws ConfigError unless sigma0 > 1/2.
ParameterLadder with_sigma0(ParameterLadder ladder, double sigma0);

/// 𝒫(s) = Σ_{n<X²} Λ_X(n) / (n^s log n) over prime powers.
std::complex<double> mollifier_P(zeta::SPoint s0, double X, const nt::PrimeTable& table);

/// Re Σ_{lo<p<=hi} p^{-s}.
double prime_sum(zeta::SPoint s0, double lo, double hi, const nt::PrimeTable& table);

/// Re 𝒫(s) split into the primes up to X (= P), the tapered primes in
/// (X, X²), prime squares and higher prime powers.
struct DiscardDecomposition {
  double re_mollifier = 0.0;
  double primes = 0.0;
  double tapered_primes = 0.0;
  double squares = 0.0;
  double higher_powers = 0.0;
};
DiscardDecomposition discard_decomposition(zeta::SPoint s0, double X, const nt::PrimeTable& table);

enum ChainFlag : unsigned {
  kNone = 0,
  kLineZero = 1u << 0,  // |ζ(1/2+iτ)| below the log floor
  kOffZero = 1u << 1,   // |ζ(σ₀+iτ)| below the log floor
  kNonFinite = 1u << 2,
};

/// All chain stages at one τ, normalized by ladder.s_norm.
struct ChainSample {
  double tau = 0.0;
  double v = 0.0;    // log|ζ(1/2+iτ)| / 𝔰
  double w = 0.0;    // log|ζ(σ₀+iτ)| / 𝔰
  double x = 0.0;    // Re 𝒫(s₀) / 𝔰
  double p = 0.0;    // P(s₀) / 𝔰
  double p12 = 0.0;  // (P₁ + P₂)(s₀) / 𝔰
  double p3 = 0.0;   // P₃(s₀) / 𝔰
  unsigned flags = kNone;

  [[nodiscard]] bool excluded() const noexcept { return flags != kNone; }
};

/// Precomputes everything τ-independent for one ladder; evaluate() is const
/// and safe to call from many threads.
class ChainEvaluator {
 public:
  ChainEvaluator(ParameterLadder ladder, const nt::PrimeTable& table, const zeta::EMConfig& cfg,
                 bool with_zeta = true);

  [[nodiscard]] const ParameterLadder& ladder() const noexcept { return ladder_; }
  [[nodiscard]] ChainSample evaluate(double tau) const;

  /// Only the prime-sum stages (p, p12, p3); v, w, x are left at zero.
  [[nodiscard]] ChainSample evaluate_prime_stages(double tau) const;

 private:
  ParameterLadder ladder_;
  std::optional<zeta::ZetaBatch> zeta_;
  kernels::DirichletBasis mollifier_;
  kernels::DirichletBasis primes_;  // p <= X, weights p^{-σ₀}
  std::size_t count_p1_ = 0;
  std::size_t count_p12_ = 0;
};

ChainSample evaluate_chain(double tau, const ParameterLadder& ladder, const nt::PrimeTable& table,
                           const zeta::EMConfig& cfg);

/// Table limit needed for a ladder: primes below X².
std::uint64_t table_limit_for(const ParameterLadder& ladder);

}  // namespace sclt::chain
