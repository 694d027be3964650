#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace sclt::metrics {

/// A discrete probability measure on the real line: strictly increasing
/// atoms with positive weights summing to one.
class EmpiricalMeasure {
 public:
  /// Uniform weights 1/n over the samples; duplicates are merged.
  static EmpiricalMeasure from_samples(std::span<const double> samples);

  /// Arbitrary atoms and positive weights. Atoms are sorted and duplicates
  /// merged; the weights must already sum to 1 within 1e-12.
  static EmpiricalMeasure from_weighted(std::span<const double> atoms, std::span<const double> weights);

  [[nodiscard]] std::span<const double> atoms() const noexcept { return atoms_; }
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
  [[nodiscard]] std::size_t size() const noexcept { return atoms_.size(); }

  /// CSV with header "atom,weight".
  void write_csv(const std::filesystem::path& path) const;
  static EmpiricalMeasure read_csv(const std::filesystem::path& path);

 private:
  EmpiricalMeasure(std::vector<double> atoms, std::vector<double> weights);
  std::vector<double> atoms_;
  std::vector<double> weights_;
};

/// The standard normal discretized into N equal-mass atoms at the
/// (k − 1/2)/N quantiles.
struct GaussianRef {
  std::size_t quantization = 10000;

  [[nodiscard]] EmpiricalMeasure measure() const;
  /// W1 distance between the quantized and the exact Gaussian; bounds the
  /// bounded-Lipschitz discretization error.
  [[nodiscard]] double discretization_bound() const;
};

/// Exact bounded-Lipschitz (Dudley) distance
///   sup { |∫f dμ − ∫f dν| : |f| <= 1, Lip(f) <= 1 }.
double bl_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

/// Wasserstein-1 distance ∫|F_μ − F_ν|, the same supremum without |f| <= 1.
double w1_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

struct GaussianDistance {
  double distance = 0.0;
  double discretization_bound = 0.0;
};
GaussianDistance bl_distance_to_gaussian(const EmpiricalMeasure& mu, const GaussianRef& ref);

double kolmogorov_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);
/// Against the exact normal CDF (the quantization of `ref` is not used).
double kolmogorov_distance(const EmpiricalMeasure& mu, const GaussianRef& ref);

struct CFGridSpec {
  double xi_max = 3.0;
  std::size_t points = 601;  // odd, so ξ = 0 is a node
};

struct CFGrid {
  double xi_max = 0.0;
  std::vector<double> nodes;
  std::vector<std::complex<double>> values;

  [[nodiscard]] std::size_t points() const noexcept { return nodes.size(); }
};

CFGrid empirical_cf(const EmpiricalMeasure& mu, const CFGridSpec& spec);
CFGrid gaussian_cf(const CFGridSpec& spec);

/// max |a − b| over common nodes with |ξ| <= xi_limit.
double cf_sup_gap(const CFGrid& a, const CFGrid& b, double xi_limit);

/// 1/F + R·F·max_{|ξ|<F} |μ̂ − ν̂| + μ((−R,R)^c) + ν((−R,R)^c), with ‖f‖∞ = 1.
double fourier_bound(const CFGrid& mu_hat, const CFGrid& nu_hat, double R, double F, double mu_tail,
                     double nu_tail);

/// μ({|x| >= R}).
double tail_probability(const EmpiricalMeasure& mu, double R);

}  // namespace sclt::metrics
