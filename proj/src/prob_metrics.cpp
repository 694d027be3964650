#include "sclt/prob_metrics.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

#include "sclt/errors.hpp"
#include "sclt/summation.hpp"

namespace sclt::metrics {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

// Merged support of two measures with signed mass differences c_i = μ_i − ν_i.
struct SignedSupport {
  std::vector<double> points;
  std::vector<double> mass;
};

SignedSupport merge(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  SignedSupport out;
  const auto a = mu.atoms();
  const auto wa = mu.weights();
  const auto b = nu.atoms();
  const auto wb = nu.weights();
  out.points.reserve(a.size() + b.size());
  out.mass.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      out.points.push_back(a[i]);
      out.mass.push_back(wa[i++]);
    } else if (i == a.size() || b[j] < a[i]) {
      out.points.push_back(b[j]);
      out.mass.push_back(-wb[j++]);
    } else {
      out.points.push_back(a[i]);
      out.mass.push_back(wa[i++] - wb[j++]);
    }
  }
  return out;
}

}  // namespace

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {}

EmpiricalMeasure EmpiricalMeasure::from_samples(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("EmpiricalMeasure: empty sample set");
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw DomainError("EmpiricalMeasure: non-finite sample");
  }
  std::sort(sorted.begin(), sorted.end());
  const double unit = 1.0 / static_cast<double>(sorted.size());
  std::vector<double> atoms, weights;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    atoms.push_back(sorted[i]);
    weights.push_back(static_cast<double>(j - i) * unit);
    i = j;
  }
  return EmpiricalMeasure(std::move(atoms), std::move(weights));
}

EmpiricalMeasure EmpiricalMeasure::from_weighted(std::span<const double> atoms, std::span<const double> weights) {
  if (atoms.empty()) throw DomainError("EmpiricalMeasure: empty measure");
  if (atoms.size() != weights.size()) throw DomainError("EmpiricalMeasure: atoms/weights size mismatch");
  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
  std::vector<double> xs, ws;
  CompensatedSum total;
  for (std::size_t idx : order) {
    if (!std::isfinite(atoms[idx])) throw DomainError("EmpiricalMeasure: non-finite atom");
    if (!(weights[idx] > 0.0)) throw DomainError("EmpiricalMeasure: weights must be positive");
    total += weights[idx];
    if (!xs.empty() && xs.back() == atoms[idx]) {
      ws.back() += weights[idx];
    } else {
      xs.push_back(atoms[idx]);
      ws.push_back(weights[idx]);
    }
  }
  if (std::fabs(total.value() - 1.0) > 1e-12) {
    throw DomainError("EmpiricalMeasure: weights sum to " + std::to_string(total.value()) + ", expected 1");
  }
  return EmpiricalMeasure(std::move(xs), std::move(ws));
}

void EmpiricalMeasure::write_csv(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("EmpiricalMeasure::write_csv: cannot open " + path.string());
  os.precision(17);
  os << "atom,weight\n";
  for (std::size_t i = 0; i < atoms_.size(); ++i) os << atoms_[i] << ',' << weights_[i] << '\n';
}

EmpiricalMeasure EmpiricalMeasure::read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("EmpiricalMeasure::read_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || line.substr(0, 11) != "atom,weight") {
    throw std::runtime_error("EmpiricalMeasure::read_csv: missing \"atom,weight\" header in " + path.string());
  }
  std::vector<double> atoms, weights;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("EmpiricalMeasure::read_csv: malformed row: " + line);
    atoms.push_back(std::stod(line.substr(0, comma)));
    weights.push_back(std::stod(line.substr(comma + 1)));
  }
  return from_weighted(atoms, weights);
}

EmpiricalMeasure GaussianRef::measure() const {
  if (quantization < 100) throw DomainError("GaussianRef: quantization must be at least 100");
  const boost::math::normal_distribution<double> normal;
  const double n = static_cast<double>(quantization);
  std::vector<double> atoms(quantization);
  std::vector<double> weights(quantization, 1.0 / n);
  for (std::size_t k = 0; k < quantization; ++k) {
    atoms[k] = boost::math::quantile(normal, (static_cast<double>(k) + 0.5) / n);
  }
  return EmpiricalMeasure::from_weighted(atoms, weights);
}

double GaussianRef::discretization_bound() const {
  // On the k-th equal-mass cell [a, b] around the atom q the transport cost
  // is ∫|x − q| dΦ = 2φ(q) − φ(a) − φ(b), because Φ(q) − Φ(a) = Φ(b) − Φ(q).
  const EmpiricalMeasure g = measure();
  const boost::math::normal_distribution<double> normal;
  const double n = static_cast<double>(quantization);
  CompensatedSum acc;
  for (std::size_t k = 0; k < quantization; ++k) {
    const double a = k == 0 ? 0.0 : normal_pdf(boost::math::quantile(normal, static_cast<double>(k) / n));
    const double b = k + 1 == quantization ? 0.0
                                           : normal_pdf(boost::math::quantile(normal, static_cast<double>(k + 1) / n));
    acc += 2.0 * normal_pdf(g.atoms()[k]) - a - b;
  }
  return acc.value();
}

double bl_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  // Maximize Σ c_i f_i over |f_i| <= 1, |f_{i+1} − f_i| <= x_{i+1} − x_i.
  // Dynamic programming over the value f_i: V_i(f) is concave and piecewise
  // linear on [−1, 1]. It is stored as a multiset of (slope, length) pieces
  // keyed by slope, with a lazy slope offset and the value V_i(−1).
  // Passing to the next atom dilates V by the gap d (the argmax plateau
  // widens by 2d, the rest shifts outward, and both ends are cut back to
  // [−1, 1]) and then adds the linear term c_i f.
  const SignedSupport s = merge(mu, nu);
  std::map<double, double> pieces;  // stored slope -> total length
  double offset = 0.0;
  double left_value = 0.0;

  pieces[s.mass[0]] = 2.0;
  left_value = -s.mass[0];
  for (std::size_t i = 1; i < s.points.size(); ++i) {
    const double d = s.points[i] - s.points[i - 1];
    pieces[-offset] += 2.0 * d;

    double remaining = d;
    while (remaining > 0.0 && !pieces.empty()) {
      auto it = std::prev(pieces.end());
      const double take = std::min(it->second, remaining);
      left_value += (it->first + offset) * take;
      remaining -= take;
      it->second -= take;
      if (it->second <= 0.0) pieces.erase(it);
    }
    remaining = d;
    while (remaining > 0.0 && !pieces.empty()) {
      auto it = pieces.begin();
      const double take = std::min(it->second, remaining);
      remaining -= take;
      it->second -= take;
      if (it->second <= 0.0) pieces.erase(it);
    }

    offset += s.mass[i];
    left_value -= s.mass[i];
  }
  double best = left_value;
  for (const auto& [key, length] : pieces) {
    const double slope = key + offset;
    if (slope > 0.0) best += slope * length;
  }
  return std::max(0.0, best);
}

double w1_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  const SignedSupport s = merge(mu, nu);
  CompensatedSum acc;
  CompensatedSum cdf_gap;
  for (std::size_t i = 0; i + 1 < s.points.size(); ++i) {
    cdf_gap += s.mass[i];
    acc += std::fabs(cdf_gap.value()) * (s.points[i + 1] - s.points[i]);
  }
  return acc.value();
}

GaussianDistance bl_distance_to_gaussian(const EmpiricalMeasure& mu, const GaussianRef& ref) {
  return {bl_distance(mu, ref.measure()), ref.discretization_bound()};
}

double kolmogorov_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  const SignedSupport s = merge(mu, nu);
  CompensatedSum gap;
  double best = 0.0;
  for (double m : s.mass) {
    gap += m;
    best = std::max(best, std::fabs(gap.value()));
  }
  return std::min(best, 1.0);
}

double kolmogorov_distance(const EmpiricalMeasure& mu, const GaussianRef& ref) {
  (void)ref;
  CompensatedSum cdf;
  double best = 0.0;
  const auto xs = mu.atoms();
  const auto ws = mu.weights();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double phi = normal_cdf(xs[i]);
    best = std::max(best, std::fabs(cdf.value() - phi));
    cdf += ws[i];
    best = std::max(best, std::fabs(std::min(cdf.value(), 1.0) - phi));
  }
  return best;
}

namespace {

std::vector<double> cf_nodes(const CFGridSpec& spec) {
  if (!(spec.xi_max > 0.0)) throw DomainError("CF grid: xi_max must be positive");
  if (spec.points < 3 || spec.points % 2 == 0) throw DomainError("CF grid: points must be odd and >= 3");
  std::vector<double> nodes(spec.points);
  const std::size_t mid = spec.points / 2;
  const double step = spec.xi_max / static_cast<double>(mid);
  for (std::size_t j = 0; j < spec.points; ++j) {
    const double k = static_cast<double>(j) - static_cast<double>(mid);
    nodes[j] = k * step;
  }
  nodes.front() = -spec.xi_max;
  nodes.back() = spec.xi_max;
  return nodes;
}

}  // namespace

CFGrid empirical_cf(const EmpiricalMeasure& mu, const CFGridSpec& spec) {
  CFGrid out;
  out.xi_max = spec.xi_max;
  out.nodes = cf_nodes(spec);
  out.values.resize(out.nodes.size());
  const auto xs = mu.atoms();
  const auto ws = mu.weights();
  const auto n = static_cast<std::ptrdiff_t>(out.nodes.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const double xi = out.nodes[static_cast<std::size_t>(j)];
    CompensatedComplexSum acc;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double ph = xi * xs[k];
      acc.add(ws[k] * std::cos(ph), ws[k] * std::sin(ph));
    }
    out.values[static_cast<std::size_t>(j)] = acc.value();
  }
  out.values[out.nodes.size() / 2] = 1.0;
  return out;
}

CFGrid gaussian_cf(const CFGridSpec& spec) {
  CFGrid out;
  out.xi_max = spec.xi_max;
  out.nodes = cf_nodes(spec);
  out.values.reserve(out.nodes.size());
  for (double xi : out.nodes) out.values.emplace_back(std::exp(-0.5 * xi * xi), 0.0);
  return out;
}

double cf_sup_gap(const CFGrid& a, const CFGrid& b, double xi_limit) {
  if (a.nodes != b.nodes) throw DomainError("cf_sup_gap: grids have different nodes");
  double best = 0.0;
  for (std::size_t j = 0; j < a.nodes.size(); ++j) {
    if (std::fabs(a.nodes[j]) <= xi_limit) best = std::max(best, std::abs(a.values[j] - b.values[j]));
  }
  return best;
}

double fourier_bound(const CFGrid& mu_hat, const CFGrid& nu_hat, double R, double F, double mu_tail,
                     double nu_tail) {
  if (mu_hat.nodes != nu_hat.nodes) throw DomainError("fourier_bound: grids have different nodes");
  if (!(R > 0.0) || !(F > 0.0)) throw DomainError("fourier_bound: R and F must be positive");
  if (mu_hat.xi_max < F) throw DomainError("fourier_bound: grid does not reach xi = F");
  double gap = 0.0;
  for (std::size_t j = 0; j < mu_hat.nodes.size(); ++j) {
    if (std::fabs(mu_hat.nodes[j]) < F) gap = std::max(gap, std::abs(mu_hat.values[j] - nu_hat.values[j]));
  }
  return 1.0 / F + R * F * gap + mu_tail + nu_tail;
}

double tail_probability(const EmpiricalMeasure& mu, double R) {
  if (!(R > 0.0)) throw DomainError("tail_probability: R must be positive");
  CompensatedSum acc;
  const auto xs = mu.atoms();
  const auto ws = mu.weights();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::fabs(xs[i]) >= R) acc += ws[i];
  }
  return std::min(1.0, acc.value());
}

}  // namespace sclt::metrics
