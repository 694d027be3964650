#include "sclt/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "sclt/counter_rng.hpp"
#include "sclt/errors.hpp"
#include "sclt/number_theory.hpp"
#include "sclt/prob_metrics.hpp"
#include "sclt/summation.hpp"

namespace sclt::run {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDegradedRate = 0.01;

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void apply_threads(const RunConfig& cfg) {
  if (cfg.threads > 0) omp_set_num_threads(static_cast<int>(cfg.threads));
}

double population_sd(const std::vector<double>& v) {
  CompensatedSum s;
  for (double x : v) s += x;
  const double mean = s.value() / static_cast<double>(v.size());
  CompensatedSum q;
  for (double x : v) q += (x - mean) * (x - mean);
  return std::sqrt(q.value() / static_cast<double>(v.size()));
}

// Runs body(i) for i in [0, n) across threads; rethrows the first failure.
template <class F>
void parallel_for(std::size_t n, F&& body) {
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(sclt_parallel_for_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

FourierDiagnostics fourier_diagnostics(const metrics::EmpiricalMeasure& stage, const RunConfig& cfg,
                                       const chain::ParameterLadder& ladder) {
  const double ll = std::log(std::log(ladder.T));
  FourierDiagnostics out;
  out.R = cfg.r1 > 0.0 ? cfg.r1 : std::sqrt(ll);
  out.F = cfg.fourier_c * std::sqrt(ll);
  out.reference_tail = std::pow(ll, -cfg.fourier_d);

  const metrics::CFGridSpec spec{cfg.cf_xi_max, cfg.cf_points};
  out.cf_gap = metrics::cf_sup_gap(metrics::empirical_cf(stage, spec), metrics::gaussian_cf(spec), cfg.cf_xi_max);

  const metrics::CFGridSpec bound_spec{std::max(cfg.cf_xi_max, out.F), cfg.cf_points};
  out.tail_stage = metrics::tail_probability(stage, out.R);
  out.tail_gaussian = std::erfc(out.R / std::sqrt(2.0));
  out.bound = metrics::fourier_bound(metrics::empirical_cf(stage, bound_spec), metrics::gaussian_cf(bound_spec),
                                     out.R, out.F, out.tail_stage, out.tail_gaussian);
  return out;
}

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

std::vector<double> sample_tau(double T, std::size_t n, std::uint64_t seed) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = T + T * rng::uniform01(seed, i);
  return out;
}

ChainRun run_chain_experiment(const RunConfig& cfg) {
  cfg.validate();
  apply_threads(cfg);
  const chain::ParameterLadder ladder = cfg.ladder(cfg.T);
  const nt::PrimeTable table = nt::sieve_primes(chain::table_limit_for(ladder));
  const chain::ChainEvaluator evaluator(ladder, table, cfg.em_config());

  const std::vector<double> taus = sample_tau(cfg.T, cfg.samples, cfg.seed);
  std::vector<chain::ChainSample> all(taus.size());
  parallel_for(taus.size(), [&](std::size_t i) { all[i] = evaluator.evaluate(taus[i]); });

  ChainRun run;
  ChainReport& rep = run.report;
  rep.T = cfg.T;
  rep.samples = cfg.samples;
  rep.normalization = cfg.normalization;
  rep.ladder = ladder;
  rep.seed = cfg.seed;

  for (const auto& s : all) {
    if (s.excluded()) {
      ++rep.excluded;
    } else {
      run.samples.push_back(s);
    }
  }
  if (static_cast<double>(rep.excluded) > kDegradedRate * static_cast<double>(cfg.samples)) rep.status = "degraded";
  if (run.samples.empty()) {
    rep.status = "error: every sample was excluded";
    rep.distances = {kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN};
    return run;
  }

  CompensatedSum off;
  for (const auto& s : run.samples) off += std::fabs(s.v - s.w) * ladder.s_norm;
  run.offaxis_mean = off.value() / static_cast<double>(run.samples.size());

  double factor = 1.0;  // extra divisor on top of s_norm
  if (cfg.normalization == Normalization::kVariance) {
    std::vector<double> p12;
    p12.reserve(run.samples.size());
    for (const auto& s : run.samples) p12.push_back(s.p12);
    factor = population_sd(p12);
    if (!(factor > 0.0)) throw ConfigError("run_chain_experiment: P1 + P2 has zero empirical variance");
  }
  rep.scale = ladder.s_norm * factor;

  const std::size_t n = run.samples.size();
  std::vector<double> v(n), w(n), x(n), p(n), p12(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = run.samples[i];
    s.v /= factor;
    s.w /= factor;
    s.x /= factor;
    s.p /= factor;
    s.p12 /= factor;
    s.p3 /= factor;
    v[i] = s.v;
    w[i] = s.w;
    x[i] = s.x;
    p[i] = s.p;
    p12[i] = s.p12;
  }
  using metrics::EmpiricalMeasure;
  const auto mv = EmpiricalMeasure::from_samples(v);
  const auto mw = EmpiricalMeasure::from_samples(w);
  const auto mx = EmpiricalMeasure::from_samples(x);
  const auto mp = EmpiricalMeasure::from_samples(p);
  const auto mp12 = EmpiricalMeasure::from_samples(p12);
  const metrics::GaussianRef ref{cfg.gaussian_quantization};
  const auto gauss = ref.measure();

  auto& d = rep.distances;
  d.d_v_w = metrics::bl_distance(mv, mw);
  d.d_w_x = metrics::bl_distance(mw, mx);
  d.d_x_p = metrics::bl_distance(mx, mp);
  d.d_p_p12 = metrics::bl_distance(mp, mp12);
  d.d_p12_z = metrics::bl_distance(mp12, gauss);
  d.d_sum = d.d_v_w + d.d_w_x + d.d_x_p + d.d_p_p12 + d.d_p12_z;
  d.d_v_z_direct = metrics::bl_distance(mv, gauss);
  rep.discretization_bound = ref.discretization_bound();
  rep.fourier = fourier_diagnostics(mp12, cfg, ladder);
  return run;
}

PrimeStageRun run_prime_stages(const RunConfig& cfg) {
  cfg.validate();
  apply_threads(cfg);
  const chain::ParameterLadder ladder = cfg.ladder(cfg.T);
  const nt::PrimeTable table = nt::sieve_primes(chain::table_limit_for(ladder));
  const chain::ChainEvaluator evaluator(ladder, table, cfg.em_config(), false);
  const std::vector<double> taus = sample_tau(cfg.T, cfg.samples, cfg.seed);

  PrimeStageRun out;
  out.p12.resize(taus.size());
  parallel_for(taus.size(), [&](std::size_t i) { out.p12[i] = evaluator.evaluate_prime_stages(taus[i]).p12; });
  double factor = 1.0;
  if (cfg.normalization == Normalization::kVariance) {
    factor = population_sd(out.p12);
    if (!(factor > 0.0)) throw ConfigError("run_prime_stages: P1 + P2 has zero empirical variance");
    for (double& x : out.p12) x /= factor;
  }
  out.scale = ladder.s_norm * factor;
  const auto mp12 = metrics::EmpiricalMeasure::from_samples(out.p12);
  out.d_p12_z = metrics::bl_distance(mp12, metrics::GaussianRef{cfg.gaussian_quantization}.measure());
  out.fourier = fourier_diagnostics(mp12, cfg, ladder);
  return out;
}

std::string chain_csv_header() {
  return "T,samples,excluded,norm_mode,d_v_w,d_w_x,d_x_p,d_p_p12,d_p12_z,d_sum,d_v_z_direct,X,X1,X2,sigma0,s_norm,"
         "seed,status";
}

std::string chain_csv_row(const ChainReport& r) {
  const auto& d = r.distances;
  std::ostringstream os;
  os << fmt9(r.T) << ',' << r.samples << ',' << r.excluded << ',' << to_string(r.normalization) << ','
     << fmt9(d.d_v_w) << ',' << fmt9(d.d_w_x) << ',' << fmt9(d.d_x_p) << ',' << fmt9(d.d_p_p12) << ','
     << fmt9(d.d_p12_z) << ',' << fmt9(d.d_sum) << ',' << fmt9(d.d_v_z_direct) << ',' << fmt9(r.ladder.X) << ','
     << fmt9(r.ladder.X1) << ',' << fmt9(r.ladder.X2) << ',' << fmt9(r.ladder.sigma0) << ','
     << fmt9(r.ladder.s_norm) << ',' << r.seed << ',' << csv_safe(r.status);
  return os.str();
}

void write_chain_csv(std::ostream& os, const std::vector<ChainReport>& reports) {
  os << chain_csv_header() << '\n';
  for (const auto& r : reports) os << chain_csv_row(r) << '\n';
}

nlohmann::json to_json(const ChainReport& r) {
  const auto& d = r.distances;
  nlohmann::json j;
  j["T"] = r.T;
  j["samples"] = r.samples;
  j["excluded"] = r.excluded;
  j["norm_mode"] = to_string(r.normalization);
  j["d_v_w"] = d.d_v_w;
  j["d_w_x"] = d.d_w_x;
  j["d_x_p"] = d.d_x_p;
  j["d_p_p12"] = d.d_p_p12;
  j["d_p12_z"] = d.d_p12_z;
  j["d_sum"] = d.d_sum;
  j["d_v_z_direct"] = d.d_v_z_direct;
  j["X"] = r.ladder.X;
  j["X1"] = r.ladder.X1;
  j["X2"] = r.ladder.X2;
  j["sigma0"] = r.ladder.sigma0;
  j["s_norm"] = r.ladder.s_norm;
  j["seed"] = r.seed;
  j["status"] = r.status;
  j["scale"] = r.scale;
  j["discretization_bound"] = r.discretization_bound;
  j["clamps"] = r.ladder.clamps;
  j["fourier"] = {{"cf_gap", r.fourier.cf_gap}, {"R", r.fourier.R},
                  {"F", r.fourier.F},           {"tail_stage", r.fourier.tail_stage},
                  {"tail_gaussian", r.fourier.tail_gaussian}, {"bound", r.fourier.bound},
                  {"reference_tail", r.fourier.reference_tail}};
  return j;
}

MomentCheck run_moment_check(const RunConfig& cfg) {
  cfg.validate();
  apply_threads(cfg);
  MomentCheck out;
  out.sigma0 = cfg.sigma0 != 0.0 ? cfg.sigma0 : 0.5 + 1.0 / std::log(cfg.T);
  const nt::PrimeTable table = nt::sieve_primes(static_cast<std::uint64_t>(std::ceil(cfg.moment_x)));
  const auto quad = moments::trapezoid(cfg.T, cfg.quadrature_nodes);
  const auto values = moments::prime_sum_on_nodes(quad.nodes, cfg.moment_x, out.sigma0, table);

  for (unsigned k = 1; k <= cfg.moment_k_max; ++k) {
    const double cf = moments::closed_form_moment(k, cfg.moment_x, out.sigma0, table);
    const double rp = moments::random_phase_moment(k, cfg.moment_x, out.sigma0, table);
    const double emp = moments::empirical_moment(values, quad.weights, 2 * k);
    const auto corr = moments::closed_form_corrections(k, cfg.moment_x, out.sigma0, cfg.T, table);
    out.reports.push_back(moments::make_report(k, cf, rp, emp, values.size(), corr));
  }
  for (unsigned k = 0; k < cfg.moment_k_max; ++k) {
    const unsigned power = 2 * k + 1;
    out.odd.push_back({power, moments::empirical_moment(values, quad.weights, power),
                       moments::moment_standard_error(values, power)});
  }
  return out;
}

nlohmann::json to_json(const moments::MomentReport& r) {
  return {{"k", r.k},
          {"closed_form", r.closed_form},
          {"random_phase", r.random_phase},
          {"empirical", r.empirical},
          {"gap_cf_emp", r.gap_cf_emp},
          {"gap_rp_cf", r.gap_rp_cf},
          {"n", r.n}};
}

nlohmann::json to_json(const MomentCheck& c) {
  nlohmann::json j;
  j["sigma0"] = c.sigma0;
  j["reports"] = nlohmann::json::array();
  j["regime"] = nlohmann::json::array();
  for (const auto& r : c.reports) {
    j["reports"].push_back(to_json(r));
    nlohmann::json flag = {{"k", r.k},
                           {"invalid_regime", r.invalid_regime},
                           {"off_diagonal", r.corrections.off_diagonal}};
    flag["lower_order"] = r.corrections.lower_order_applicable ? nlohmann::json(r.corrections.lower_order)
                                                               : nlohmann::json("not applicable");
    j["regime"].push_back(flag);
  }
  j["odd"] = nlohmann::json::array();
  for (const auto& o : c.odd) {
    j["odd"].push_back({{"power", o.power}, {"value", o.value}, {"standard_error", o.standard_error}});
  }
  return j;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) return kNaN;
  const auto ra = ranks(a);
  const auto rb = ranks(b);
  const double mean = 0.5 * static_cast<double>(a.size() + 1);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (ra[i] - mean) * (rb[i] - mean);
    saa += (ra[i] - mean) * (ra[i] - mean);
    sbb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (saa == 0.0 || sbb == 0.0) return kNaN;
  return sab / std::sqrt(saa * sbb);
}

LadderResult run_rate_ladder(const RunConfig& cfg, const std::vector<double>& T_values) {
  LadderResult out;
  std::vector<double> x2, dist;
  for (double T : T_values) {
    RunConfig row = cfg;
    row.T = T;
    try {
      ChainReport r = run_chain_experiment(row).report;
      if (r.status != "ok" && r.status.rfind("error", 0) == 0) {
        out.rows.push_back(std::move(r));
        continue;
      }
      x2.push_back(r.ladder.X2);
      dist.push_back(r.distances.d_p12_z);
      out.rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      ChainReport r;
      r.T = T;
      r.samples = cfg.samples;
      r.normalization = cfg.normalization;
      r.seed = cfg.seed;
      r.ladder.T = T;
      r.ladder.X = r.ladder.X1 = r.ladder.X2 = r.ladder.sigma0 = r.ladder.s_norm = kNaN;
      r.distances = {kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN};
      r.status = std::string("error: ") + e.what();
      out.rows.push_back(std::move(r));
    }
  }
  out.spearman = spearman(x2, dist);
  return out;
}

CutoffTrend cutoff_trend(const RunConfig& cfg, const std::vector<double>& theta_2_values) {
  CutoffTrend out;
  for (double th : theta_2_values) {
    RunConfig row = cfg;
    row.ladder_mode = LadderMode::kExplicit;
    row.theta_2 = th;
    const PrimeStageRun r = run_prime_stages(row);
    out.theta_2.push_back(th);
    out.X2.push_back(row.ladder(row.T).X2);
    out.distance.push_back(r.d_p12_z);
  }
  for (std::size_t i = 1; i < out.distance.size(); ++i) {
    if (out.distance[i] > out.distance[i - 1]) ++out.violations;
  }
  return out;
}

IdentitySweep run_identity_sweep(const RunConfig& cfg) {
  cfg.validate();
  apply_threads(cfg);
  const zeta::EMConfig em = cfg.em_config();
  IdentitySweep out;

  const double W = cfg.identity_window;
  const double lo = std::max(cfg.identity_t_min - W, 10.0);
  const zeta::ZeroList zeros = zeta::find_zeros(lo, cfg.identity_t_max + W, em, cfg.zero_resolution);
  out.zero_count = zeros.ordinates.size();
  const nt::PrimeTable table =
      nt::sieve_primes(static_cast<std::uint64_t>(std::ceil(cfg.identity_x * cfg.identity_x)));

  const std::size_t m = cfg.identity_points;
  out.t.resize(m);
  out.residual.resize(m);
  out.explicit_residual.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.t[i] = m == 1 ? cfg.identity_t_min
                      : cfg.identity_t_min + (cfg.identity_t_max - cfg.identity_t_min) * static_cast<double>(i) /
                                                 static_cast<double>(m - 1);
  }
  parallel_for(m, [&](std::size_t i) {
    const auto check = zeta::verify_selberg_identity({cfg.identity_sigma, out.t[i]}, cfg.identity_x, zeros, table, em, W);
    out.residual[i] = check.residual;
    out.explicit_residual[i] = check.explicit_residual;
  });
  out.max_residual = *std::max_element(out.residual.begin(), out.residual.end());

  const double sigma0 = cfg.sigma0 != 0.0 ? cfg.sigma0 : 0.5 + 1.0 / std::log(cfg.T);
  out.offaxis_reference = (sigma0 - 0.5) * std::log(cfg.T);
  if (cfg.offaxis_samples > 0) {
    const std::array<double, 2> sigmas{0.5, sigma0};
    const zeta::ZetaBatch batch(sigmas, 2.0 * cfg.T, em);
    const auto taus = sample_tau(cfg.T, cfg.offaxis_samples, cfg.seed);
    std::vector<double> gap(taus.size(), kNaN);
    parallel_for(taus.size(), [&](std::size_t i) {
      const auto z = batch.evaluate(taus[i]);
      const double a = std::abs(z[0].value);
      const double b = std::abs(z[1].value);
      if (a >= zeta::kLogFloor && b >= zeta::kLogFloor) gap[i] = std::fabs(std::log(a) - std::log(b));
    });
    CompensatedSum acc;
    for (double g : gap) {
      if (std::isnan(g)) {
        ++out.offaxis_excluded;
      } else {
        acc += g;
        ++out.offaxis_samples;
      }
    }
    if (out.offaxis_samples > 0) out.offaxis_mean = acc.value() / static_cast<double>(out.offaxis_samples);
  }
  return out;
}

nlohmann::json to_json(const IdentitySweep& s) {
  nlohmann::json j;
  j["t"] = s.t;
  j["residual"] = s.residual;
  j["explicit_residual"] = s.explicit_residual;
  j["max_residual"] = s.max_residual;
  j["zero_count"] = s.zero_count;
  j["offaxis_mean"] = s.offaxis_mean;
  j["offaxis_reference"] = s.offaxis_reference;
  j["offaxis_samples"] = s.offaxis_samples;
  j["offaxis_excluded"] = s.offaxis_excluded;
  return j;
}

}  // namespace sclt::run
