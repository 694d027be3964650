#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sclt/dirichlet_chain.hpp"
#include "sclt/moment_oracle.hpp"
#include "sclt/run_config.hpp"

namespace sclt::run {

/// n heights uniform on [T, 2T]; sample i depends only on (seed, i).
std::vector<double> sample_tau(double T, std::size_t n, std::uint64_t seed);

struct StageDistances {
  double d_v_w = 0.0;      // log|ζ(½+iτ)| vs log|ζ(σ₀+iτ)|
  double d_w_x = 0.0;      // log|ζ(σ₀+iτ)| vs Re 𝒫(s₀)
  double d_x_p = 0.0;      // Re 𝒫(s₀) vs P(s₀)
  double d_p_p12 = 0.0;    // P vs P₁ + P₂
  double d_p12_z = 0.0;    // P₁ + P₂ vs standard normal
  double d_sum = 0.0;
  double d_v_z_direct = 0.0;
};

/// Smoothing-inequality diagnostics for the P₁ + P₂ stage.
struct FourierDiagnostics {
  double cf_gap = 0.0;  // sup_{|ξ|<=cf_xi_max} |empirical CF − e^{−ξ²/2}|
  double R = 0.0;
  double F = 0.0;
  double tail_stage = 0.0;
  double tail_gaussian = 0.0;
  double bound = 0.0;  // right-hand side of the smoothing inequality at (R, F)
  double reference_tail = 0.0;  // (log log T)^{-D}
};

struct ChainReport {
  double T = 0.0;
  std::size_t samples = 0;
  std::size_t excluded = 0;
  Normalization normalization = Normalization::kVariance;
  StageDistances distances;
  chain::ParameterLadder ladder;
  std::uint64_t seed = 0;
  std::string status = "ok";  // ok | degraded | error: <message>
  double scale = 0.0;         // the divisor applied to raw stage values
  double discretization_bound = 0.0;
  FourierDiagnostics fourier;
};

struct ChainRun {
  ChainReport report;
  /// Kept samples, already divided by report.scale.
  std::vector<chain::ChainSample> samples;
  /// Mean |log|ζ(½+iτ)| − log|ζ(σ₀+iτ)|| over kept samples, unnormalized.
  double offaxis_mean = 0.0;
};

ChainRun run_chain_experiment(const RunConfig& config);

/// Only the prime stages (no ζ): CF and BL comparison of (P₁+P₂)/scale with
/// the normal law. Cheap enough for 10⁴ and more samples.
struct PrimeStageRun {
  std::vector<double> p12;  // normalized
  double scale = 0.0;
  double d_p12_z = 0.0;
  FourierDiagnostics fourier;
};
PrimeStageRun run_prime_stages(const RunConfig& config);

std::string chain_csv_header();
std::string chain_csv_row(const ChainReport& report);
void write_chain_csv(std::ostream& os, const std::vector<ChainReport>& reports);
nlohmann::json to_json(const ChainReport& report);

struct OddMoment {
  unsigned power = 0;
  double value = 0.0;
  double standard_error = 0.0;
};

struct MomentCheck {
  std::vector<moments::MomentReport> reports;  // k = 1..moment_k_max
  std::vector<OddMoment> odd;                  // powers 1, 3, ..., 2k_max − 1
  double sigma0 = 0.0;
};
MomentCheck run_moment_check(const RunConfig& config);
nlohmann::json to_json(const moments::MomentReport& report);
nlohmann::json to_json(const MomentCheck& check);

struct LadderResult {
  std::vector<ChainReport> rows;
  /// Spearman rank correlation of d_p12_z against X2 over ok rows; NaN when
  /// fewer than two ok rows.
  double spearman = 0.0;
};
LadderResult run_rate_ladder(const RunConfig& config, const std::vector<double>& T_values);

/// Gaussian-stage distance over a ladder of second cutoffs at fixed T.
struct CutoffTrend {
  std::vector<double> theta_2;
  std::vector<double> X2;
  std::vector<double> distance;
  std::size_t violations = 0;  // adjacent pairs where the distance increases
};
CutoffTrend cutoff_trend(const RunConfig& config, const std::vector<double>& theta_2_values);

struct IdentitySweep {
  std::vector<double> t;
  std::vector<double> residual;
  std::vector<double> explicit_residual;
  double max_residual = 0.0;
  std::size_t zero_count = 0;
  double offaxis_mean = 0.0;
  double offaxis_reference = 0.0;  // (σ₀ − ½) log T
  std::size_t offaxis_samples = 0;
  std::size_t offaxis_excluded = 0;
};
IdentitySweep run_identity_sweep(const RunConfig& config);
nlohmann::json to_json(const IdentitySweep& sweep);

double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace sclt::run
