#include "sclt/moment_oracle.hpp"

#include <boost/math/special_functions/factorials.hpp>
#include <cmath>

#include "sclt/errors.hpp"
#include "sclt/kernels.hpp"
#include "sclt/summation.hpp"

namespace sclt::moments {

namespace {

void check_sigma(double sigma0) {
  if (!(sigma0 >= 0.5 && sigma0 <= 1.0)) throw DomainError("moment oracle: sigma0 must lie in [1/2, 1]");
}

double gaussian_factor(unsigned k) {
  // 2^{-k} (2k)! / k!, i.e. the (2k-1)!! Gaussian moment.
  return boost::math::double_factorial<double>(2 * k - 1);
}

}  // namespace

double closed_form_moment(unsigned k, double X, double sigma0, const nt::PrimeTable& table) {
  if (k == 0) return 1.0;
  check_sigma(sigma0);
  const double v = nt::prime_variance(X, sigma0, table);
  return gaussian_factor(k) * std::pow(v, static_cast<double>(k));
}

MomentCorrections closed_form_corrections(unsigned k, double X, double sigma0, double T,
                                          const nt::PrimeTable& table) {
  MomentCorrections out;
  if (k == 0) return out;
  check_sigma(sigma0);
  const double v = nt::prime_variance(X, sigma0, table);
  out.lower_order_applicable = k >= 2;
  if (out.lower_order_applicable) out.lower_order = gaussian_factor(k) * std::pow(v, static_cast<double>(k) - 2.0);
  out.off_diagonal = std::pow(X, 4.0 * k) / T;
  return out;
}

double random_phase_raw_moment(unsigned m, double X, double sigma0, const nt::PrimeTable& table) {
  check_sigma(sigma0);
  if (m > kMaxRandomPhasePower) {
    throw ResourceError("random_phase_raw_moment: power " + std::to_string(m) +
                        " is beyond the exact expansion limit; use Monte Carlo instead");
  }
  if (m % 2 == 1) return 0.0;
  if (X > static_cast<double>(table.limit())) throw DomainError("random_phase_raw_moment: X exceeds table limit");

  // E[(Σ Y_p)^m] = m! [λ^m] Π_p E[e^{λ Y_p}], with Y_p = a_p cos θ_p and
  // E[Y_p^{2j}] / (2j)! = a_p^{2j} C(2j, j) / (4^j (2j)!).
  const unsigned half = m / 2;
  std::vector<double> egf(half + 1, 0.0);  // coefficients of λ^{2j}
  egf[0] = 1.0;
  std::vector<double> unit(half + 1);
  double central = 1.0;  // C(2j, j) / 4^j
  for (unsigned j = 0; j <= half; ++j) {
    if (j > 0) central *= (2.0 * j - 1.0) / (2.0 * j);
    unit[j] = central / boost::math::factorial<double>(2 * j);
  }
  const auto [first, last] = table.range(0.0, X);
  const auto primes = table.primes();
  std::vector<double> next(half + 1);
  for (std::size_t i = first; i < last; ++i) {
    const double a2 = std::exp(-2.0 * sigma0 * std::log(static_cast<double>(primes[i])));
    std::vector<double> factor(half + 1);
    double pw = 1.0;
    for (unsigned j = 0; j <= half; ++j) {
      factor[j] = unit[j] * pw;
      pw *= a2;
    }
    for (unsigned d = 0; d <= half; ++d) {
      CompensatedSum acc;
      for (unsigned j = 0; j <= d; ++j) acc += egf[d - j] * factor[j];
      next[d] = acc.value();
    }
    egf.swap(next);
  }
  return boost::math::factorial<double>(m) * egf[half];
}

double random_phase_moment(unsigned k, double X, double sigma0, const nt::PrimeTable& table) {
  return random_phase_raw_moment(2 * k, X, sigma0, table);
}

double empirical_moment(std::span<const double> samples, unsigned power) {
  if (samples.empty()) throw DomainError("empirical_moment: empty sample set");
  CompensatedSum acc;
  for (double x : samples) acc += std::pow(x, static_cast<double>(power));
  return acc.value() / static_cast<double>(samples.size());
}

double empirical_moment(std::span<const double> samples, std::span<const double> weights, unsigned power) {
  if (samples.empty()) throw DomainError("empirical_moment: empty sample set");
  if (samples.size() != weights.size()) throw DomainError("empirical_moment: weights size mismatch");
  CompensatedSum acc, total;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    acc += weights[i] * std::pow(samples[i], static_cast<double>(power));
    total += weights[i];
  }
  return acc.value() / total.value();
}

double moment_standard_error(std::span<const double> samples, unsigned power) {
  if (samples.size() < 2) throw DomainError("moment_standard_error: need at least two samples");
  const double mean = empirical_moment(samples, power);
  CompensatedSum acc;
  for (double x : samples) {
    const double d = std::pow(x, static_cast<double>(power)) - mean;
    acc += d * d;
  }
  const double n = static_cast<double>(samples.size());
  return std::sqrt(acc.value() / (n - 1.0) / n);
}

Quadrature trapezoid(double T, std::size_t nodes) {
  if (nodes < 2) throw DomainError("trapezoid: need at least two nodes");
  Quadrature q;
  q.nodes.resize(nodes);
  q.weights.assign(nodes, 1.0);
  const double h = T / static_cast<double>(nodes - 1);
  for (std::size_t i = 0; i < nodes; ++i) q.nodes[i] = T + h * static_cast<double>(i);
  q.nodes.back() = 2.0 * T;
  q.weights.front() = 0.5;
  q.weights.back() = 0.5;
  return q;
}

std::vector<double> prime_sum_on_nodes(std::span<const double> nodes, double X, double sigma0,
                                       const nt::PrimeTable& table) {
  if (X > static_cast<double>(table.limit())) throw DomainError("prime_sum_on_nodes: X exceeds table limit");
  kernels::DirichletBasis basis;
  const auto [first, last] = table.range(0.0, X);
  const auto primes = table.primes();
  std::vector<double> w;
  for (std::size_t i = first; i < last; ++i) {
    const double lp = std::log(static_cast<double>(primes[i]));
    basis.log_n.push_back(lp);
    w.push_back(std::exp(-sigma0 * lp));
  }
  basis.weights.push_back(std::move(w));
  std::vector<std::size_t> counts(nodes.size(), basis.size());
  std::vector<std::complex<double>> sums(nodes.size());
  kernels::parallel::dirichlet_sums(basis, nodes, counts, sums);
  std::vector<double> out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = sums[i].real();
  return out;
}

MomentReport make_report(unsigned k, double closed_form, double random_phase, double empirical, std::size_t n,
                         const MomentCorrections& corrections) {
  MomentReport r;
  r.k = k;
  r.closed_form = closed_form;
  r.random_phase = random_phase;
  r.empirical = empirical;
  r.gap_cf_emp = std::fabs(closed_form - empirical) / std::fabs(closed_form);
  r.gap_rp_cf = std::fabs(random_phase - closed_form) / std::fabs(closed_form);
  r.n = n;
  r.corrections = corrections;
  r.invalid_regime = corrections.off_diagonal > 0.1 * closed_form;
  return r;
}

}  // namespace sclt::moments
