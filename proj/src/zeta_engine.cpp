#include "sclt/zeta_engine.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "sclt/errors.hpp"
#include "sclt/summation.hpp"

namespace sclt::zeta {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// B_{2k} / (2k)! for k = 0..kMaxBernoulliOrder + 1.
const std::array<double, kMaxBernoulliOrder + 2>& bernoulli_coefficients() {
  static const auto table = [] {
    std::array<double, kMaxBernoulliOrder + 2> c{};
    for (int k = 0; k <= kMaxBernoulliOrder + 1; ++k) {
      c[k] = boost::math::bernoulli_b2n<double>(k) /
             boost::math::factorial<double>(static_cast<unsigned>(2 * k));
    }
    return c;
  }();
  return table;
}

void validate_point(SPoint s) {
  if (!std::isfinite(s.sigma) || !std::isfinite(s.t)) throw DomainError("zeta: non-finite argument");
  if (s.sigma < kMinSigma) throw DomainError("zeta: sigma below the supported half-plane (0.4)");
  if (s.sigma == 1.0 && s.t == 0.0) throw DomainError("zeta: s = 1 is a pole");
  if (std::fabs(s.t) > kZetaHeightCap) throw ConfigError("zeta: height exceeds the engine cap of 1e7");
}

void validate_config(const EMConfig& cfg) {
  if (cfg.bernoulli_order < 1 || cfg.bernoulli_order > kMaxBernoulliOrder) {
    throw ConfigError("EMConfig: bernoulli_order must lie in [1, 20]");
  }
  if (!(cfg.error_budget > 0.0)) throw ConfigError("EMConfig: error_budget must be positive");
}

struct Tail {
  cplx value;
  cplx derivative;
  double bound = 0.0;
  double derivative_bound = 0.0;
};

// Everything in Euler–Maclaurin beyond the direct sum Σ_{n<N} n^{-s}.
Tail em_tail(cplx s, std::size_t terms, int order) {
  const auto& c = bernoulli_coefficients();
  const double N = static_cast<double>(terms);
  const double logN = std::log(N);
  const cplx Ns = std::exp(-s * logN);  // N^{-s}
  Tail out;

  const cplx a = N * Ns / (s - 1.0);
  out.value += a;
  out.derivative += a * (-logN - 1.0 / (s - 1.0));

  out.value += 0.5 * Ns;
  out.derivative += -logN * 0.5 * Ns;

  // term_k = c_k · s(s+1)…(s+2k−2) · N^{−s−2k+1}
  cplx rising = s;           // s(s+1)…(s+2k−2)
  cplx rising_log = 1.0 / s;  // Σ 1/(s+j)
  cplx power = Ns / N;       // N^{−s−2k+1}
  for (int k = 1; k <= order; ++k) {
    const cplx term = c[k] * rising * power;
    out.value += term;
    out.derivative += term * (rising_log - logN);
    const double j1 = 2.0 * k - 1.0;
    const double j2 = 2.0 * k;
    rising *= (s + j1) * (s + j2);
    rising_log += 1.0 / (s + j1) + 1.0 / (s + j2);
    power /= N * N;
  }
  // Remainder after M corrections is bounded by the next term times
  // |s + 2M + 1| / (σ + 2M + 1).
  const int M = order;
  const double next = std::abs(c[M + 1] * rising * power);
  const double factor = std::abs(s + (2.0 * M + 1.0)) / (s.real() + 2.0 * M + 1.0);
  out.bound = next * factor;
  out.derivative_bound = out.bound * (std::abs(rising_log) + logN + 1.0);
  return out;
}

std::size_t choose_terms(SPoint s, const EMConfig& cfg) {
  const std::size_t need = required_terms(s, cfg.bernoulli_order);
  if (cfg.terms == 0) {
    // Grow N geometrically until the truncation bound fits half the budget.
    std::size_t n = need;
    while (n < 4 * need && em_tail(s.value(), n, cfg.bernoulli_order).bound > 0.5 * cfg.error_budget) {
      n = static_cast<std::size_t>(std::ceil(1.25 * static_cast<double>(n)));
    }
    return n;
  }
  if (cfg.terms < need) {
    throw ConfigError("EMConfig: " + std::to_string(cfg.terms) + " terms is outside the accuracy domain at t=" +
                      std::to_string(s.t) + "; at least " + std::to_string(need) + " terms are required");
  }
  return cfg.terms;
}

// Worst-case rounding of Σ_{n<N} n^{-σ} e^{-it log n}: each term carries a
// relative error of a few ulps plus the phase error |t| log n · eps.
double rounding_bound(SPoint s, std::size_t terms) {
  const double N = static_cast<double>(terms);
  const double sigma = s.sigma;
  const double mass = std::fabs(sigma - 1.0) < 1e-12 ? 1.0 + std::log(N)
                                                     : 1.0 + (std::pow(N, 1.0 - sigma) - 1.0) / (1.0 - sigma);
  return 4.0 * kEps * mass * (2.0 + std::fabs(s.t) * std::log(N));
}

ZetaValue assemble(SPoint s, std::size_t terms, const EMConfig& cfg, cplx direct) {
  const Tail tail = em_tail(s.value(), terms, cfg.bernoulli_order);
  ZetaValue out;
  out.value = direct + tail.value;
  out.truncation_bound = tail.bound;
  out.rounding_bound = rounding_bound(s, terms);
  out.terms = terms;
  out.within_budget = out.error_bound() <= cfg.error_budget;
  return out;
}

LogDerivValue assemble_log_deriv(const ZetaValue& z, SPoint s, std::size_t terms, const EMConfig& cfg,
                                 cplx direct_log_weighted) {
  const Tail tail = em_tail(s.value(), terms, cfg.bernoulli_order);
  const cplx deriv = -direct_log_weighted + tail.derivative;
  const double zabs = std::abs(z.value);
  if (zabs < kLogFloor) throw DomainError("zeta_log_deriv: zeta vanishes numerically at s");
  LogDerivValue out;
  out.value = deriv / z.value;
  const double dabs = std::max(std::abs(deriv), kLogFloor);
  const double deriv_round = z.rounding_bound * std::log(static_cast<double>(terms));
  out.relative_error_bound = (tail.derivative_bound + deriv_round) / dabs + z.error_bound() / zabs;
  return out;
}

// Im log Γ(1/4 + it/2) − (t/2) log π through a shifted Stirling series.
double theta_exact(double t) {
  constexpr int shift = 10;
  const cplx z(0.25, 0.5 * t);
  cplx correction = 0.0;
  for (int j = 0; j < shift; ++j) correction += std::log(z + static_cast<double>(j));
  const cplx w = z + static_cast<double>(shift);
  const cplx w2 = w * w;
  const cplx lg = (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * kPi) + 1.0 / (12.0 * w) -
                  1.0 / (360.0 * w * w2) + 1.0 / (1260.0 * w * w2 * w2) - 1.0 / (1680.0 * w * w2 * w2 * w2);
  return (lg - correction).imag() - 0.5 * t * std::log(kPi);
}

double hardy_z_from(double t, cplx zeta_value) {
  const double th = hardy_theta(t);
  return (cplx(std::cos(th), std::sin(th)) * zeta_value).real();
}

}  // namespace

std::size_t required_terms(SPoint s, int bernoulli_order) {
  const double modulus = std::abs(s.value());
  const double n = std::ceil((modulus + 2.0 * bernoulli_order + 2.0) / kPi);
  return std::max<std::size_t>(2, static_cast<std::size_t>(n));
}

ZetaValue zeta(SPoint s, const EMConfig& cfg) {
  validate_point(s);
  validate_config(cfg);
  const std::size_t terms = choose_terms(s, cfg);
  const std::array<double, 1> sigmas{s.sigma};
  const auto basis = kernels::integer_basis(terms - 1, sigmas);
  std::array<cplx, 1> direct{};
  kernels::parallel::dirichlet_sum(basis, s.t, terms - 1, direct);
  return assemble(s, terms, cfg, direct[0]);
}

LogAbsZeta log_abs_zeta(SPoint s, const EMConfig& cfg) {
  const ZetaValue z = zeta(s, cfg);
  const double a = std::abs(z.value);
  if (!(a >= kLogFloor)) return {0.0, true};
  return {std::log(a), false};
}

LogDerivValue zeta_log_deriv(SPoint s, const EMConfig& cfg) {
  validate_point(s);
  validate_config(cfg);
  const std::size_t terms = choose_terms(s, cfg);
  const std::array<double, 1> sigmas{s.sigma};
  auto basis = kernels::integer_basis(terms - 1, sigmas);
  std::vector<double> weighted(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) weighted[i] = basis.log_n[i] * basis.weights[0][i];
  basis.weights.push_back(std::move(weighted));
  std::array<cplx, 2> direct{};
  kernels::parallel::dirichlet_sum(basis, s.t, terms - 1, direct);
  const ZetaValue z = assemble(s, terms, cfg, direct[0]);
  return assemble_log_deriv(z, s, terms, cfg, direct[1]);
}

ZetaBatch::ZetaBatch(std::span<const double> sigmas, double max_height, const EMConfig& cfg,
                     bool with_derivative)
    : sigmas_(sigmas.begin(), sigmas.end()), max_height_(max_height), cfg_(cfg), with_derivative_(with_derivative) {
  validate_config(cfg_);
  if (sigmas_.empty()) throw ConfigError("ZetaBatch: at least one sigma is required");
  if (sigmas_.size() * (with_derivative ? 2 : 1) > kernels::kMaxColumns) {
    throw ConfigError("ZetaBatch: too many sigma columns");
  }
  for (double sg : sigmas_) validate_point({sg, max_height_});
  std::size_t terms = 0;
  for (double sg : sigmas_) terms = std::max(terms, choose_terms({sg, max_height_}, cfg_));
  basis_ = kernels::integer_basis(terms - 1, sigmas_);
  if (with_derivative_) {
    const std::size_t cols = sigmas_.size();
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<double> weighted(basis_.size());
      for (std::size_t i = 0; i < basis_.size(); ++i) weighted[i] = basis_.log_n[i] * basis_.weights[j][i];
      basis_.weights.push_back(std::move(weighted));
    }
  }
}

std::size_t ZetaBatch::terms_at(double t) const {
  if (std::fabs(t) > max_height_) throw ConfigError("ZetaBatch: height above the configured maximum");
  std::size_t terms = 0;
  for (double sg : sigmas_) {
    validate_point({sg, t});
    terms = std::max(terms, choose_terms({sg, t}, cfg_));
  }
  return std::min(terms, basis_.size() + 1);
}

std::vector<ZetaValue> ZetaBatch::evaluate(double t) const {
  const std::size_t terms = terms_at(t);
  std::array<cplx, kernels::kMaxColumns> direct{};
  kernels::parallel::dirichlet_sum(basis_, t, terms - 1, direct);
  std::vector<ZetaValue> out;
  out.reserve(sigmas_.size());
  for (std::size_t j = 0; j < sigmas_.size(); ++j) out.push_back(assemble({sigmas_[j], t}, terms, cfg_, direct[j]));
  return out;
}

std::vector<LogDerivValue> ZetaBatch::log_deriv(double t) const {
  if (!with_derivative_) throw PreconditionError("ZetaBatch::log_deriv: batch built without derivative columns");
  const std::size_t terms = terms_at(t);
  std::array<cplx, kernels::kMaxColumns> direct{};
  kernels::parallel::dirichlet_sum(basis_, t, terms - 1, direct);
  std::vector<LogDerivValue> out;
  const std::size_t cols = sigmas_.size();
  for (std::size_t j = 0; j < cols; ++j) {
    const SPoint s{sigmas_[j], t};
    const ZetaValue z = assemble(s, terms, cfg_, direct[j]);
    out.push_back(assemble_log_deriv(z, s, terms, cfg_, direct[cols + j]));
  }
  return out;
}

double hardy_theta(double t) {
  if (t < 0.0) return -hardy_theta(-t);
  if (t < 10.0) return theta_exact(t);
  const double t3 = t * t * t;
  return 0.5 * t * std::log(t / (2.0 * kPi)) - 0.5 * t - kPi / 8.0 + 1.0 / (48.0 * t) + 7.0 / (5760.0 * t3) +
         31.0 / (80640.0 * t3 * t * t);
}

double hardy_z(double t, const EMConfig& cfg) { return hardy_z_from(t, zeta({0.5, t}, cfg).value); }

double zero_count_main_term(double t) { return hardy_theta(t) / kPi + 1.0; }

ZeroList find_zeros(double t_min, double t_max, const EMConfig& cfg, double resolution, double height_cap) {
  if (!(t_min > 0.0) || !(t_min < t_max)) throw ConfigError("find_zeros: need 0 < t_min < t_max");
  if (t_max > height_cap) {
    throw ConfigError("find_zeros: window top " + std::to_string(t_max) + " exceeds the zero-scan cap " +
                      std::to_string(height_cap));
  }
  if (!(resolution > 0.0)) throw ConfigError("find_zeros: resolution must be positive");

  const std::array<double, 1> half{0.5};
  const ZetaBatch batch(half, t_max, cfg);
  auto Z = [&](double t) { return hardy_z_from(t, batch.evaluate(t)[0].value); };

  const auto steps = static_cast<std::size_t>(std::ceil((t_max - t_min) / resolution));
  const double h = (t_max - t_min) / static_cast<double>(steps);
  std::vector<double> grid(steps + 1);
  const auto npts = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < npts; ++i) grid[static_cast<std::size_t>(i)] = Z(t_min + static_cast<double>(i) * h);

  std::vector<std::size_t> brackets;
  for (std::size_t i = 0; i < steps; ++i) {
    if ((grid[i] < 0.0) != (grid[i + 1] < 0.0)) brackets.push_back(i);
  }

  ZeroList out;
  out.t_min = t_min;
  out.t_max = t_max;
  out.resolution = resolution;
  out.ordinates.resize(brackets.size());
  const auto nb = static_cast<std::ptrdiff_t>(brackets.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t i = brackets[static_cast<std::size_t>(b)];
    double lo = t_min + static_cast<double>(i) * h;
    double hi = (i + 1 == steps) ? t_max : t_min + static_cast<double>(i + 1) * h;
    bool lo_negative = grid[i] < 0.0;
    while (hi - lo > 1e-8) {
      const double mid = 0.5 * (lo + hi);
      if ((Z(mid) < 0.0) == lo_negative) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.ordinates[static_cast<std::size_t>(b)] = 0.5 * (lo + hi);
  }
  out.expected_count = (hardy_theta(t_max) - hardy_theta(t_min)) / kPi;
  out.count_check_passed = std::fabs(static_cast<double>(out.ordinates.size()) - out.expected_count) <= 2.0;
  return out;
}

void save_zero_cache(const ZeroList& zeros, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_zero_cache: cannot open " + path.string());
  os << std::setprecision(12) << "# window " << zeros.t_min << ' ' << zeros.t_max << ' ' << zeros.resolution
     << '\n';
  for (double g : zeros.ordinates) os << g << '\n';
}

ZeroList load_zero_cache(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_zero_cache: cannot open " + path.string());
  std::string line;
  ZeroList out;
  if (!std::getline(is, line)) throw std::runtime_error("load_zero_cache: empty file " + path.string());
  std::istringstream header(line);
  std::string hash, word;
  if (!(header >> hash >> word >> out.t_min >> out.t_max >> out.resolution) || hash != "#" || word != "window") {
    throw std::runtime_error("load_zero_cache: bad header in " + path.string());
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const double g = std::stod(line);
    if (!out.ordinates.empty() && g <= out.ordinates.back()) {
      throw std::runtime_error("load_zero_cache: ordinates not strictly increasing");
    }
    out.ordinates.push_back(g);
  }
  out.expected_count = (hardy_theta(out.t_max) - hardy_theta(out.t_min)) / kPi;
  out.count_check_passed =
      std::fabs(static_cast<double>(out.ordinates.size()) - out.expected_count) <= 2.0;
  return out;
}

SelbergCheck verify_selberg_identity(SPoint s, double X, const ZeroList& zeros, const nt::PrimeTable& table,
                                     const EMConfig& cfg, double window) {
  if (X < 2.0) throw DomainError("verify_selberg_identity: X must be >= 2");
  if (!(window > 0.0)) throw PreconditionError("verify_selberg_identity: window must be positive");
  const double height = std::fabs(s.t);
  // No zeros lie below the first ordinate 14.1347...
  const double need_lo = std::max(height - window, 14.0);
  const double need_hi = height + window;
  if (zeros.t_min > need_lo || zeros.t_max < need_hi) {
    std::ostringstream msg;
    msg << "verify_selberg_identity: zero list covers (" << zeros.t_min << ", " << zeros.t_max
        << ") but ordinates in [" << need_lo << ", " << need_hi << "] are required";
    throw PreconditionError(msg.str());
  }

  const double logX = std::log(X);
  const double magnitude = (std::pow(X, 0.5 - s.sigma) + std::pow(X, 1.0 - 2.0 * s.sigma)) / logX;
  const double density = std::log(std::max(need_hi, 2.0 * kPi) / (2.0 * kPi)) / (2.0 * kPi) + 1.0;
  const double tail = 2.0 * magnitude * density / window;
  if (!(tail < 1.0)) {
    std::ostringstream msg;
    msg << "verify_selberg_identity: window " << window << " leaves an omitted-zero tail bound of " << tail
        << "; a window of at least " << 2.0 * magnitude * density << " is required";
    throw PreconditionError(msg.str());
  }

  SelbergCheck out;
  out.tail_bound = tail;
  out.log_deriv = zeta_log_deriv(s, cfg).value;

  const cplx sv = s.value();
  const double x2 = X * X;
  CompensatedComplexSum moll;
  for (const auto& pp : nt::prime_powers_below(x2, table)) {
    const double n = static_cast<double>(pp.n);
    const double weight = std::log(static_cast<double>(pp.p)) * nt::lambda_X_taper(n, X);
    if (weight == 0.0) continue;
    moll.add(weight * std::exp(-sv * std::log(n)));
  }
  out.mollifier_sum = moll.value();

  CompensatedComplexSum zsum;
  for (double g : zeros.ordinates) {
    for (double sign : {1.0, -1.0}) {
      const cplx rho(0.5, sign * g);
      const cplx d = rho - sv;
      zsum.add((std::exp(d * logX) - std::exp(2.0 * d * logX)) / ((sv - rho) * (sv - rho)));
    }
  }
  out.zero_sum = zsum.value();

  const cplx one_minus_s = 1.0 - sv;
  out.pole_term = (std::exp(2.0 * one_minus_s * logX) - std::exp(one_minus_s * logX)) /
                  (logX * one_minus_s * one_minus_s);
  CompensatedComplexSum triv;
  for (int q = 1; q < 10000; ++q) {
    const cplx w = 2.0 * q + sv;
    const cplx term = (std::exp(-w * logX) - std::exp(-2.0 * w * logX)) / (w * w);
    triv.add(term);
    if (std::abs(term) < 1e-18) break;
  }
  out.trivial_zero_term = triv.value() / logX;

  const cplx core = out.log_deriv + out.mollifier_sum - out.zero_sum / logX;
  out.residual = std::abs(core);
  out.explicit_residual = std::abs(core - out.pole_term - out.trivial_zero_term);
  return out;
}

}  // namespace sclt::zeta
