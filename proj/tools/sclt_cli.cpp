#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sclt/errors.hpp"
#include "sclt/experiment.hpp"
#include "sclt/zeta_engine.hpp"

namespace fs = std::filesystem;
using namespace sclt;

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<double> T;
  std::string out;
  std::optional<unsigned> threads;
  std::string normalization;
  bool plot = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "flat key = value run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "64-bit sampling seed");
  cmd->add_option("--samples", o.samples, "number of tau samples")->check(CLI::PositiveNumber);
  cmd->add_option("--t", o.T, "height T (tau uniform on [T, 2T])");
  cmd->add_option("--out", o.out, "output path (stdout when omitted)");
  cmd->add_option("--threads", o.threads, "OpenMP worker threads");
  cmd->add_option("--normalization", o.normalization, "paper | variance")->check(CLI::IsMember({"paper", "variance"}));
  cmd->add_flag("--plot", o.plot, "also write a gnuplot script next to the CSV");
}

run::RunConfig resolve(const CommonOptions& o) {
  run::RunConfig c = o.config.empty() ? run::RunConfig{} : run::RunConfig::load(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.samples) c.samples = *o.samples;
  if (o.T) c.T = *o.T;
  if (o.threads) c.threads = *o.threads;
  if (!o.normalization.empty()) c.normalization = run::parse_normalization(o.normalization);
  if (!o.out.empty()) c.out_csv = o.out;
  c.validate();
  if (c.threads > 0) omp_set_num_threads(static_cast<int>(c.threads));
  return c;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path);
  if (!os) throw ResourceError("cannot write " + path);
  os << text;
}

void write_plot(const std::string& csv_path, const std::string& x_column) {
  if (csv_path.empty()) throw ConfigError("--plot needs --out (the script references the CSV file)");
  const fs::path csv(csv_path);
  fs::path script = csv;
  script.replace_extension(".gp");
  std::ofstream os(script);
  if (!os) throw ResourceError("cannot write " + script.string());
  const std::string name = csv.filename().string();
  os << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set terminal pngcairo size 900,600\n"
     << "set output '" << csv.stem().string() << ".png'\n"
     << "set ylabel 'bounded-Lipschitz distance'\n";
  if (x_column == "T") {
    os << "set logscale x\nset xlabel 'T'\n"
       << "plot '" << name << "' using 1:9 with linespoints title 'd_p12_z', \\\n"
       << "     '" << name << "' using 1:10 with linespoints title 'd_sum', \\\n"
       << "     '" << name << "' using 1:11 with linespoints title 'd_v_z_direct'\n";
  } else {
    os << "set style data histograms\nset style fill solid 0.6\nset xlabel 'stage'\n"
       << "plot '" << name << "' using 5 title 'd_v_w', '' using 6 title 'd_w_x', '' using 7 title 'd_x_p', "
       << "'' using 8 title 'd_p_p12', '' using 9 title 'd_p12_z'\n";
  }
}

std::string chain_csv(const std::vector<run::ChainReport>& rows) {
  std::ostringstream os;
  run::write_chain_csv(os, rows);
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale experiments on the distribution of log|zeta| along the critical line"};
  app.require_subcommand(1);

  CommonOptions chain_o, moments_o, ladder_o, identity_o;
  auto* chain = app.add_subcommand("chain", "run the five-stage chain and report stagewise distances");
  add_common(chain, chain_o);
  auto* mom = app.add_subcommand("moments", "closed-form, random-phase and quadrature moments");
  add_common(mom, moments_o);
  auto* ladder = app.add_subcommand("ladder", "one chain row per T in ladder_t_values");
  add_common(ladder, ladder_o);
  auto* ident = app.add_subcommand("identity", "explicit-formula residuals and off-axis shift");
  add_common(ident, identity_o);

  double z_lo = 10.0, z_hi = 100.0, z_res = zeta::kDefaultZeroResolution;
  std::string z_out;
  auto* zeros = app.add_subcommand("zeros", "critical-line zeros by sign scan and bisection");
  zeros->add_option("--t-min", z_lo, "window start")->capture_default_str();
  zeros->add_option("--t-max", z_hi, "window end")->capture_default_str();
  zeros->add_option("--resolution", z_res, "scan step")->capture_default_str();
  zeros->add_option("--out", z_out, "zero cache file (stdout when omitted)");

  double e_sigma = 0.5, e_t = 0.0;
  std::size_t e_terms = 0;
  int e_order = 10;
  auto* eval = app.add_subcommand("zeta-eval", "zeta, log|zeta| and zeta'/zeta at one point");
  eval->add_option("--sigma", e_sigma, "real part")->capture_default_str();
  eval->add_option("--t", e_t, "imaginary part")->capture_default_str();
  eval->add_option("--terms", e_terms, "Euler-Maclaurin N (0 = automatic)")->capture_default_str();
  eval->add_option("--bernoulli-order", e_order, "Euler-Maclaurin M")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*chain) {
      const auto cfg = resolve(chain_o);
      const auto result = run::run_chain_experiment(cfg);
      emit(cfg.out_csv, chain_csv({result.report}));
      if (!cfg.out_json.empty()) {
        auto j = run::to_json(result.report);
        j["offaxis_mean"] = result.offaxis_mean;
        emit(cfg.out_json, j.dump(2) + "\n");
      }
      if (chain_o.plot) write_plot(cfg.out_csv, "stage");
      if (result.report.status != "ok") std::cerr << "status: " << result.report.status << "\n";
    } else if (*mom) {
      const auto cfg = resolve(moments_o);
      emit(moments_o.out.empty() ? cfg.out_json : moments_o.out, run::to_json(run::run_moment_check(cfg)).dump(2) + "\n");
    } else if (*ladder) {
      const auto cfg = resolve(ladder_o);
      const auto res = run::run_rate_ladder(cfg, cfg.ladder_t_values);
      emit(cfg.out_csv, chain_csv(res.rows));
      std::cerr << "spearman(d_p12_z, X2) = " << res.spearman << "\n";
      if (ladder_o.plot) write_plot(cfg.out_csv, "T");
    } else if (*ident) {
      const auto cfg = resolve(identity_o);
      emit(identity_o.out.empty() ? cfg.out_json : identity_o.out, run::to_json(run::run_identity_sweep(cfg)).dump(2) + "\n");
    } else if (*zeros) {
      const auto list = zeta::find_zeros(z_lo, z_hi, {}, z_res);
      if (z_out.empty()) {
        std::cout.precision(12);
        for (double g : list.ordinates) std::cout << g << "\n";
      } else {
        zeta::save_zero_cache(list, z_out);
      }
      std::cerr << list.ordinates.size() << " zeros, main-term count " << list.expected_count
                << (list.count_check_passed ? " (ok)" : " (count check FAILED)") << "\n";
    } else if (*eval) {
      zeta::EMConfig cfg;
      cfg.terms = e_terms;
      cfg.bernoulli_order = e_order;
      const zeta::SPoint s{e_sigma, e_t};
      const auto z = zeta::zeta(s, cfg);
      const auto l = zeta::log_abs_zeta(s, cfg);
      const auto d = zeta::zeta_log_deriv(s, cfg);
      nlohmann::json j = {{"sigma", e_sigma},
                          {"t", e_t},
                          {"zeta", {z.value.real(), z.value.imag()}},
                          {"error_bound", z.error_bound()},
                          {"terms", z.terms},
                          {"log_abs", l.value},
                          {"log_abs_flagged", l.flagged},
                          {"log_deriv", {d.value.real(), d.value.imag()}}};
      std::cout << j.dump(2) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
