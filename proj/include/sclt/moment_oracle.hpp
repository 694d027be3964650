#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sclt/number_theory.hpp"

namespace sclt::moments {

/// Main term of E[(Re Σ_{p<=X} p^{-s₀})^{2k}]: 2^{-k} (2k)!/k! · V^k with
/// V = ½ Σ_{p<=X} p^{-2σ₀}. k = 0 gives 1.
double closed_form_moment(unsigned k, double X, double sigma0, const nt::PrimeTable& table);

/// Magnitudes of the terms the closed form leaves out.
struct MomentCorrections {
  bool lower_order_applicable = false;  // false for k = 1 (negative exponent)
  double lower_order = 0.0;             // 2^{-k}(2k)!/k! · V^{k-2}
  double off_diagonal = 0.0;            // X^{4k} / T
};
MomentCorrections closed_form_corrections(unsigned k, double X, double sigma0, double T,
                                          const nt::PrimeTable& table);

/// Exact E[(Σ_{p<=X} p^{-σ₀} cos θ_p)^m] for independent uniform phases θ_p.
/// Odd m gives exactly 0. Throws ResourceError for m > kMaxRandomPhasePower.
double random_phase_raw_moment(unsigned m, double X, double sigma0, const nt::PrimeTable& table);
inline constexpr unsigned kMaxRandomPhasePower = 60;

/// The 2k-th random-phase moment.
double random_phase_moment(unsigned k, double X, double sigma0, const nt::PrimeTable& table);

/// Mean of x^power (signed for odd powers). Throws DomainError on empty input.
double empirical_moment(std::span<const double> samples, unsigned power);
/// Weighted mean Σ w_i x_i^power / Σ w_i.
double empirical_moment(std::span<const double> samples, std::span<const double> weights, unsigned power);
/// Standard error of the mean of x^power.
double moment_standard_error(std::span<const double> samples, unsigned power);

/// Trapezoid nodes and weights on [T, 2T].
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Quadrature trapezoid(double T, std::size_t nodes);

/// Re Σ_{p<=X} p^{-σ₀-it} at every node (parallel kernel, deterministic).
std::vector<double> prime_sum_on_nodes(std::span<const double> nodes, double X, double sigma0,
                                       const nt::PrimeTable& table);

struct MomentReport {
  unsigned k = 0;  // the report compares 2k-th moments
  double closed_form = 0.0;
  double random_phase = 0.0;
  double empirical = 0.0;
  double gap_cf_emp = 0.0;  // |closed_form − empirical| / closed_form
  double gap_rp_cf = 0.0;   // |random_phase − closed_form| / closed_form
  std::size_t n = 0;        // quadrature nodes or samples
  MomentCorrections corrections;
  bool invalid_regime = false;  // X^{4k}/T above 10% of the main term
};

MomentReport make_report(unsigned k, double closed_form, double random_phase, double empirical, std::size_t n,
                         const MomentCorrections& corrections);

}  // namespace sclt::moments
