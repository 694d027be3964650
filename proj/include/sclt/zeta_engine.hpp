#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "sclt/kernels.hpp"
#include "sclt/number_theory.hpp"

namespace sclt::zeta {

/// A point s = σ + it. The engine supports σ >= 0.4.
struct SPoint {
  double sigma = 0.5;
  double t = 0.0;

  [[nodiscard]] std::complex<double> value() const noexcept { return {sigma, t}; }
};

inline constexpr double kMinSigma = 0.4;
inline constexpr double kZetaHeightCap = 1e7;
inline constexpr double kZeroScanCap = 1e5;
inline constexpr double kLogFloor = 1e-300;
inline constexpr int kMaxBernoulliOrder = 20;

/// Euler–Maclaurin settings. `terms` is N (the direct sum runs over n < N);
/// 0 selects N automatically: the accuracy-domain minimum, grown until the
/// truncation bound fits half of error_budget.
struct EMConfig {
  std::size_t terms = 0;
  int bernoulli_order = 10;
  double error_budget = 1e-8;
};

/// Smallest admissible N at s: ⌈(|s| + 2M + 2)/π⌉, which is at least ⌈|t|/π⌉
/// and keeps consecutive Bernoulli corrections shrinking by a factor 4.
std::size_t required_terms(SPoint s, int bernoulli_order);

struct ZetaValue {
  std::complex<double> value;
  double truncation_bound = 0.0;  // Euler–Maclaurin remainder bound
  double rounding_bound = 0.0;    // floating-point error bound of the direct sum
  std::size_t terms = 0;
  bool within_budget = true;

  [[nodiscard]] double error_bound() const noexcept { return truncation_bound + rounding_bound; }
};

struct LogDerivValue {
  std::complex<double> value;  // ζ'/ζ(s)
  double relative_error_bound = 0.0;
};

/// Log of |ζ(s)|; `flagged` when |ζ(s)| falls below kLogFloor, in which case
/// `value` is meaningless and callers must exclude the sample.
struct LogAbsZeta {
  double value = 0.0;
  bool flagged = false;
};

ZetaValue zeta(SPoint s, const EMConfig& cfg = {});
LogAbsZeta log_abs_zeta(SPoint s, const EMConfig& cfg = {});
LogDerivValue zeta_log_deriv(SPoint s, const EMConfig& cfg = {});

/// Evaluates ζ at a fixed set of real parts for many heights, sharing one
/// precomputed basis of log n and n^{-σ}. Heights must not exceed
/// `max_height`. Const member functions are thread-safe.
class ZetaBatch {
 public:
  ZetaBatch(std::span<const double> sigmas, double max_height, const EMConfig& cfg,
            bool with_derivative = false);

  [[nodiscard]] std::size_t sigma_count() const noexcept { return sigmas_.size(); }
  [[nodiscard]] double max_height() const noexcept { return max_height_; }
  [[nodiscard]] std::size_t terms_at(double t) const;

  /// ζ(σ_j + it) for every configured σ_j, in configuration order.
  [[nodiscard]] std::vector<ZetaValue> evaluate(double t) const;

  /// ζ'/ζ(σ_j + it); requires with_derivative.
  [[nodiscard]] std::vector<LogDerivValue> log_deriv(double t) const;

 private:
  std::vector<double> sigmas_;
  double max_height_;
  EMConfig cfg_;
  bool with_derivative_;
  kernels::DirichletBasis basis_;
};

/// θ(t), the Riemann–Siegel phase: Stirling asymptotic with three correction
/// terms for t >= 10, a shifted complex Stirling series below.
double hardy_theta(double t);

/// Z(t) = e^{iθ(t)} ζ(1/2 + it), real on the critical line.
double hardy_z(double t, const EMConfig& cfg = {});

/// Main term of the Riemann–von Mangoldt count: θ(t)/π + 1.
double zero_count_main_term(double t);

struct ZeroList {
  std::vector<double> ordinates;
  double t_min = 0.0;
  double t_max = 0.0;
  double resolution = 0.0;
  double expected_count = 0.0;  // main-term count on (t_min, t_max)
  bool count_check_passed = true;
};

inline constexpr double kDefaultZeroResolution = 0.05;

/// Sign changes of Z on a grid of step <= resolution, refined by bisection to
/// 1e-8. The count is compared with the main-term count (tolerance 2).
ZeroList find_zeros(double t_min, double t_max, const EMConfig& cfg = {},
                    double resolution = kDefaultZeroResolution, double height_cap = kZeroScanCap);

// Zero cache: header "# window <t_min> <t_max> <resolution>" followed by one
// ordinate per line with 12 significant digits.
void save_zero_cache(const ZeroList& zeros, const std::filesystem::path& path);
ZeroList load_zero_cache(const std::filesystem::path& path);

struct SelbergCheck {
  double residual = 0.0;  // |ζ'/ζ + Σ Λ_X n^{-s} − zero sum / log X|
  std::complex<double> log_deriv;
  std::complex<double> mollifier_sum;  // Σ_{n<X²} Λ_X(n) n^{-s}
  std::complex<double> zero_sum;       // Σ_ρ (X^{ρ−s} − X^{2(ρ−s)})/(s−ρ)², listed zeros
  std::complex<double> pole_term;
  std::complex<double> trivial_zero_term;
  double tail_bound = 0.0;  // bound on zeros outside the listed window
  /// Residual after also subtracting the pole and trivial-zero terms, i.e.
  /// what remains of the exact identity (omitted zeros + numerical error).
  double explicit_residual = 0.0;
};

/// Checks ζ'/ζ(s) = −Σ_{n<X²} Λ_X(n)/n^s + (1/log X) Σ_ρ (X^{ρ−s} − X^{2(ρ−s)})/(s−ρ)² + O(1)
/// using zeros within ±window of s.t. Throws PreconditionError when the zero
/// list does not cover the window or the window is too narrow for the
/// omitted-zero tail bound to be below 1.
SelbergCheck verify_selberg_identity(SPoint s, double X, const ZeroList& zeros,
                                     const nt::PrimeTable& table, const EMConfig& cfg,
                                     double window);

}  // namespace sclt::zeta
