#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sclt/counter_rng.hpp"
#include "sclt/prob_metrics.hpp"

namespace sclt::testing {

using metrics::EmpiricalMeasure;

inline EmpiricalMeasure dirac(double x) {
  const double a[] = {x};
  const double w[] = {1.0};
  return EmpiricalMeasure::from_weighted(a, w);
}

inline std::vector<double> normal_samples(std::uint64_t seed, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = rng::standard_normal(seed, i);
  return out;
}

inline EmpiricalMeasure random_measure(std::uint64_t seed, std::size_t max_atoms, double spread) {
  const std::size_t n = 1 + static_cast<std::size_t>(rng::uniform01(seed, 0, 9) * static_cast<double>(max_atoms));
  std::vector<double> atoms(n), weights(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    atoms[i] = spread * (2.0 * rng::uniform01(seed, i, 1) - 1.0);
    weights[i] = 0.05 + rng::uniform01(seed, i, 2);
    total += weights[i];
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    weights[i] /= total;
    acc += weights[i];
  }
  weights[n - 1] = 1.0 - acc;
  return EmpiricalMeasure::from_weighted(atoms, weights);
}

// Brute force over test functions with values on a 1e-3 grid: a dynamic
// program over the merged support, keeping |f| <= 1 and |f(x)−f(y)| <= |x−y|.
inline double grid_search_bl(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < mu.size(); ++i) pts.emplace_back(mu.atoms()[i], mu.weights()[i]);
  for (std::size_t i = 0; i < nu.size(); ++i) pts.emplace_back(nu.atoms()[i], -nu.weights()[i]);
  std::sort(pts.begin(), pts.end());
  const int G = 1000;  // values k/G for k in [-G, G]
  const double h = 1.0 / G;
  std::vector<double> best(2 * G + 1), next(2 * G + 1);
  for (int k = -G; k <= G; ++k) best[k + G] = pts[0].second * k * h;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const int reach = static_cast<int>(std::floor((pts[i].first - pts[i - 1].first) / h + 1e-9));
    for (int k = -G; k <= G; ++k) {
      double m = -1e300;
      for (int j = std::max(-G, k - reach); j <= std::min(G, k + reach); ++j) m = std::max(m, best[j + G]);
      next[k + G] = m + pts[i].second * k * h;
    }
    best.swap(next);
  }
  return *std::max_element(best.begin(), best.end());
}

}  // namespace sclt::testing
