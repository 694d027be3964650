// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Heavy runs (T = 1e6 chain, 1e4-sample prime stages) dominate.
#include <omp.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sclt/counter_rng.hpp"
#include "sclt/experiment.hpp"
#include "sclt/moment_oracle.hpp"
#include "sclt/number_theory.hpp"
#include "sclt/prob_metrics.hpp"
#include "sclt/zeta_engine.hpp"
#include "support.hpp"

using namespace sclt;
using cplx = std::complex<double>;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [violated]");
  }
};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

run::RunConfig desk_chain_config() {
  run::RunConfig c;
  c.T = 1e6;
  c.samples = 2000;
  c.seed = 20240611;
  c.ladder_mode = run::LadderMode::kExplicit;
  c.theta_x = 0.25;
  c.theta_1 = 0.10;
  c.theta_2 = 0.18;
  c.normalization = run::Normalization::kVariance;
  return c;
}

}  // namespace

int main() {
  omp_set_num_threads(std::max(1, omp_get_num_procs()));

  criterion(1, "zeta accuracy", [] {
    Outcome o;
    const double basel = std::abs(zeta::zeta({2.0, 0.0}).value - std::numbers::pi * std::numbers::pi / 6.0);
    o.require(basel <= 1e-10, "|zeta(2) - pi^2/6| = " + num(basel));
    double conj = 0.0;
    double worst_ratio = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
      const zeta::SPoint s{0.4 + 1.6 * rng::uniform01(101, i, 0), 1e4 * (rng::uniform01(101, i, 1) - 0.5)};
      if (std::abs(s.value() - cplx(1.0, 0.0)) < 0.05) continue;
      conj = std::max(conj, std::abs(zeta::zeta(s).value - std::conj(zeta::zeta({s.sigma, -s.t}).value)));
      const auto a = zeta::zeta(s);
      zeta::EMConfig twice;
      twice.terms = 2 * a.terms;
      const auto b = zeta::zeta(s, twice);
      worst_ratio = std::max(worst_ratio, std::abs(a.value - b.value) / a.error_bound());
    }
    o.require(conj <= 1e-10, "max conjugation gap " + num(conj));
    o.require(worst_ratio < 1.0, "max |doubled - base| / bound " + num(worst_ratio));
    return o;
  });

  criterion(2, "zeros", [] {
    Outcome o;
    const double ref[] = {14.134725, 21.022040, 25.010858};
    const auto z = zeta::find_zeros(10, 30);
    double gap = z.ordinates.size() >= 3 ? 0.0 : 1.0;
    for (std::size_t i = 0; i < 3 && i < z.ordinates.size(); ++i) gap = std::max(gap, std::fabs(z.ordinates[i] - ref[i]));
    o.require(z.ordinates.size() == 3 && gap <= 1e-4, "first three ordinates, max gap " + num(gap));
    const auto w = zeta::find_zeros(10, 100);
    o.require(w.count_check_passed, "count on (10,100): found " + std::to_string(w.ordinates.size()) +
                                        ", main term " + num(w.expected_count));
    return o;
  });

  criterion(3, "explicit-formula identity", [] {
    Outcome o;
    run::RunConfig c;
    c.identity_t_min = 100;
    c.identity_t_max = 500;
    c.identity_points = 100;
    c.identity_sigma = 0.6;
    c.identity_x = 50;
    c.identity_window = 50;
    c.offaxis_samples = 0;
    const auto s = run::run_identity_sweep(c);
    o.require(s.residual.size() == 100 && s.max_residual <= 10.0, "max residual " + num(s.max_residual) +
                                                                      " over 100 points");
    return o;
  });

  // Criteria 4 and 8 share one T = 1e6, n = 2000 chain run, made on first use.
  std::optional<run::ChainRun> chain_run;
  auto shared_chain = [&]() -> const run::ChainRun& {
    if (!chain_run) chain_run = run::run_chain_experiment(desk_chain_config());
    return *chain_run;
  };

  criterion(4, "off-axis shift", [&] {
    const auto& chain = shared_chain();
    Outcome o;
    const auto& l = chain.report.ladder;
    const double ref = 5.0 * (l.sigma0 - 0.5) * std::log(l.T);
    o.require(chain.offaxis_mean <= ref, "mean |log|zeta(1/2+it)| - log|zeta(s0+it)|| = " + num(chain.offaxis_mean) +
                                             " vs " + num(ref));
    const double rate = static_cast<double>(chain.report.excluded) / static_cast<double>(chain.report.samples);
    o.require(rate <= 0.01, "exclusion rate " + num(rate));
    return o;
  });

  criterion(5, "moments", [] {
    Outcome o;
    run::RunConfig c;
    c.T = 1e6;
    c.moment_x = 100;
    c.moment_k_max = 2;
    c.quadrature_nodes = 400001;
    const auto m = run::run_moment_check(c);
    o.require(m.reports[0].gap_cf_emp <= 0.10, "k=1 gap " + num(m.reports[0].gap_cf_emp));
    o.require(m.reports[1].gap_cf_emp <= 0.20, "k=2 gap " + num(m.reports[1].gap_cf_emp));
    double worst = 0.0;
    for (const auto& odd : m.odd) worst = std::max(worst, std::fabs(odd.value) / odd.standard_error);
    o.require(worst <= 3.0, "odd moments max |mean|/SE " + num(worst));
    o.require(m.reports[0].random_phase == m.reports[0].closed_form || m.reports[0].gap_rp_cf <= 1e-15,
              "k=1 random-phase vs closed form rel gap " + num(m.reports[0].gap_rp_cf));
    const auto table = nt::sieve_primes(100);
    const double s1 = 1.0 / 2 + 1.0 / 3 + 1.0 / 5;
    const double s2 = 1.0 / 4 + 1.0 / 9 + 1.0 / 25;
    const double hand = 3 * (s1 / 2) * (s1 / 2) - 0.375 * s2;
    const double diff = std::fabs(moments::random_phase_moment(2, 6, 0.5, table) - hand);
    o.require(diff <= 1e-12, "k=2 X=6 hand expansion gap " + num(diff));
    return o;
  });

  criterion(6, "bounded-Lipschitz metric", [] {
    Outcome o;
    using testing::dirac;
    double dirac_gap = 0.0;
    for (double t : {0.5, 1.0, 3.0}) {
      dirac_gap = std::max(dirac_gap, std::fabs(metrics::bl_distance(dirac(0), dirac(t)) - std::min(t, 2.0)));
    }
    o.require(dirac_gap <= 1e-9, "point masses max gap " + num(dirac_gap));
    double sym = 0.0, tri = 0.0, self = 0.0;
    for (std::uint64_t k = 0; k < 100; ++k) {
      const auto a = testing::random_measure(7000 + 3 * k, 50, 2.0);
      const auto b = testing::random_measure(7001 + 3 * k, 50, 2.0);
      const auto c = testing::random_measure(7002 + 3 * k, 50, 2.0);
      const double ab = metrics::bl_distance(a, b);
      sym = std::max(sym, std::fabs(ab - metrics::bl_distance(b, a)));
      tri = std::max(tri, metrics::bl_distance(a, c) - ab - metrics::bl_distance(b, c));
      self = std::max(self, metrics::bl_distance(a, a));
    }
    o.require(sym <= 1e-9 && tri <= 1e-9 && self <= 1e-9,
              "axioms: symmetry " + num(sym) + ", triangle excess " + num(tri) + ", self " + num(self));
    double brute = 0.0;
    for (std::uint64_t k = 0; k < 30; ++k) {
      const auto a = testing::random_measure(8000 + k, 3, 2.5);
      const auto b = testing::random_measure(9000 + k, 3, 2.5);
      brute = std::max(brute, std::fabs(metrics::bl_distance(a, b) - testing::grid_search_bl(a, b)));
    }
    o.require(brute <= 2e-3, "exact vs grid search max gap " + num(brute));
    const auto n = metrics::EmpiricalMeasure::from_samples(testing::normal_samples(12345, 100000));
    const double g = metrics::bl_distance_to_gaussian(n, metrics::GaussianRef{10000}).distance;
    o.require(g <= 0.02, "1e5 normal samples vs quantized Gaussian " + num(g));
    return o;
  });

  criterion(7, "smoothing bound", [] {
    Outcome o;
    const metrics::CFGridSpec wide{4.0, 801};
    std::size_t violations = 0;
    for (std::uint64_t k = 0; k < 100; ++k) {
      const auto a = testing::random_measure(11000 + k, 40, 3.0);
      const auto b = testing::random_measure(12000 + k, 40, 3.0);
      const double R = 0.5 + 3.0 * rng::uniform01(13, k);
      const double F = 0.5 + 3.5 * rng::uniform01(14, k);
      const double rhs = metrics::fourier_bound(metrics::empirical_cf(a, wide), metrics::empirical_cf(b, wide), R, F,
                                                metrics::tail_probability(a, R), metrics::tail_probability(b, R));
      if (rhs < metrics::bl_distance(a, b)) ++violations;
    }
    o.require(violations == 0, std::to_string(violations) + " violations in 100 pairs");
    const auto g = metrics::gaussian_cf({4.0, 801});
    const double F = 2.5;
    const double b = metrics::fourier_bound(g, g, 1.7, F, 0.0, 0.0);
    o.require(b == 1.0 / F, "equal transforms give 1/F: " + num(b));
    return o;
  });

  criterion(8, "chain experiment", [&] {
    const auto& chain = shared_chain();
    Outcome o;
    const auto& d = chain.report.distances;
    o.require(d.d_p12_z <= 0.15, "d((P1+P2)/sd, Z) = " + num(d.d_p12_z));
    o.require(d.d_v_z_direct <= d.d_sum + 1e-9, "direct " + num(d.d_v_z_direct) + " <= stagewise sum " + num(d.d_sum));
    std::vector<double> p, p12;
    for (const auto& s : chain.samples) {
      p.push_back(s.p12 + s.p3);
      p12.push_back(s.p12);
    }
    const double rebuilt = metrics::bl_distance(metrics::EmpiricalMeasure::from_samples(p),
                                                metrics::EmpiricalMeasure::from_samples(p12));
    o.require(std::fabs(rebuilt - d.d_p_p12) <= 1e-9, "P additivity rebuild gap " + num(std::fabs(rebuilt - d.d_p_p12)));
    return o;
  });

  criterion(9, "characteristic-function gap", [] {
    Outcome o;
    auto c = desk_chain_config();
    c.samples = 10000;
    c.cf_xi_max = 3.0;
    const auto r = run::run_prime_stages(c);
    o.require(r.fourier.cf_gap <= 0.05, "sup_{|xi|<=3} gap " + num(r.fourier.cf_gap) + " at n=1e4");
    return o;
  });

  criterion(10, "determinism across threads", [] {
    Outcome o;
    run::RunConfig c;
    c.T = 1e4;
    c.samples = 300;
    c.seed = 7;
    std::string ref;
    bool same = true;
    for (unsigned threads : {1u, 2u, 8u}) {
      c.threads = threads;
      std::ostringstream os;
      const auto r = run::run_chain_experiment(c).report;
      run::write_chain_csv(os, {r});
      os << run::to_json(r).dump();
      if (ref.empty()) {
        ref = os.str();
      } else {
        same = same && os.str() == ref;
      }
    }
    omp_set_num_threads(std::max(1, omp_get_num_procs()));
    o.require(same, "CSV and JSON bytes at 1, 2, 8 threads");
    return o;
  });

  criterion(11, "Mertens constant", [] {
    Outcome o;
    const auto table = nt::sieve_primes(1'000'000);
    const double gap = std::fabs(nt::reciprocal_prime_sum(0, 1e6, table) - std::log(std::log(1e6)) - 0.26149721);
    o.require(gap <= 1e-3, "gap " + num(gap));
    return o;
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
