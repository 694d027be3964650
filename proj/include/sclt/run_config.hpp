#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sclt/dirichlet_chain.hpp"
#include "sclt/zeta_engine.hpp"

namespace sclt::run {

enum class Normalization { kPaper, kVariance };
enum class LadderMode { kExplicit, kAsymptotic };

std::string to_string(Normalization n);
Normalization parse_normalization(const std::string& s);

/// Every knob of a run. The text format is one `key = value` per line with
/// keys spelled exactly as the fields below; `#` starts a comment.
struct RunConfig {
  double T = 1e6;
  std::size_t samples = 2000;
  std::uint64_t seed = 20240611;

  LadderMode ladder_mode = LadderMode::kExplicit;
  double theta_x = 0.25;
  double theta_1 = 0.10;
  double theta_2 = 0.18;
  std::uint64_t x_squared_cap = chain::kDefaultXSquaredCap;
  double sigma0 = 0.0;  // 0 selects 1/2 + 1/log T

  std::size_t em_terms = 0;
  unsigned em_bernoulli_order = 10;
  double em_error_budget = 1e-8;

  Normalization normalization = Normalization::kVariance;
  std::size_t gaussian_quantization = 10000;
  double cf_xi_max = 3.0;
  std::size_t cf_points = 601;
  double r1 = 0.0;  // 0 selects √(log log T)
  double fourier_c = 1.0;
  double fourier_d = 1.0;  // exponent of the (log log T)^{-D} reference tail

  double moment_x = 100.0;
  unsigned moment_k_max = 3;
  std::size_t quadrature_nodes = 400001;

  double identity_t_min = 100.0;
  double identity_t_max = 500.0;
  std::size_t identity_points = 100;
  double identity_sigma = 0.6;
  double identity_x = 50.0;
  double identity_window = 50.0;
  double zero_resolution = 0.05;
  std::size_t offaxis_samples = 2000;  // off-axis samples in the identity sweep; 0 skips

  std::vector<double> ladder_t_values{1e5, 1e6, 1e7};

  std::string out_csv;
  std::string out_json;
  unsigned threads = 0;  // 0 leaves the OpenMP default

  /// Throws ConfigError on any violated invariant.
  void validate() const;

  [[nodiscard]] chain::ClampPolicy clamp_policy() const;
  [[nodiscard]] chain::ParameterLadder ladder(double T) const;
  [[nodiscard]] zeta::EMConfig em_config() const;

  /// Lossless text form (shortest round-trip doubles).
  [[nodiscard]] std::string to_text() const;
  static RunConfig from_text(const std::string& text);
  static RunConfig load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  bool operator==(const RunConfig&) const = default;
};

}  // namespace sclt::run
