#include "sclt/dirichlet_chain.hpp"

#include <cmath>
#include <sstream>

#include "sclt/errors.hpp"
#include "sclt/summation.hpp"

namespace sclt::chain {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void require_table(double max_value, const nt::PrimeTable& table, const char* who) {
  if (max_value > static_cast<double>(table.limit())) {
    throw DomainError(std::string(who) + ": prime table limit " + std::to_string(table.limit()) +
                      " is below the required " + fmt(max_value));
  }
}

// Compensated Re Σ p^{-σ} cos(t log p) over primes[first, last).
double real_prime_block(const kernels::DirichletBasis& basis, double t, std::size_t first, std::size_t last) {
  CompensatedSum acc;
  for (std::size_t i = first; i < last; ++i) acc += basis.weights[0][i] * std::cos(t * basis.log_n[i]);
  return acc.value();
}

}  // namespace

ParameterLadder ladder_from_T(double T, const ClampPolicy& policy) {
  if (!(T >= 1e3)) throw ConfigError("ladder_from_T: T must be at least 1e3");
  ParameterLadder out;
  out.T = T;
  out.policy = policy;
  const double logT = std::log(T);
  out.sigma0 = 0.5 + 1.0 / logT;
  out.s_norm = std::sqrt(0.5 * std::log(logT));

  if (policy.explicit_exponents) {
    const auto [tx, t1, t2] = *policy.explicit_exponents;
    if (!(tx > 0.0 && t1 > 0.0 && t2 > 0.0)) throw ConfigError("ladder_from_T: exponents must be positive");
    out.X = std::pow(T, tx);
    out.X1 = std::pow(T, t1);
    out.X2 = std::pow(T, t2);
  } else {
    const double l2 = std::log(logT);
    const double l3 = l2 > 0.0 ? std::log(l2) : -1.0;
    const double l4 = l3 > 0.0 ? std::log(l3) : -1.0;
    if (!(l4 > 0.0)) {
      throw ConfigError("ladder_from_T: the asymptotic cutoffs need log log log log T > 0 (T > e^{e^e} ~ 3.8e6); "
                        "supply explicit exponents theta_x, theta_1, theta_2");
    }
    out.X = std::exp(logT / std::pow(l4, 0.25));
    out.X1 = std::exp(logT / l2);
    out.X2 = std::exp(logT / l3);
  }

  const double cap = static_cast<double>(policy.x_squared_cap);
  if (out.X * out.X > cap) {
    out.clamps.push_back("X clamped from " + fmt(out.X) + " to sqrt(x_squared_cap)");
    out.X = std::sqrt(cap);
  }
  if (out.X2 > out.X) {
    out.clamps.push_back("X2 clamped from " + fmt(out.X2) + " to X");
    out.X2 = out.X;
  }
  if (out.X1 > out.X2) {
    out.clamps.push_back("X1 clamped from " + fmt(out.X1) + " to X2");
    out.X1 = out.X2;
  }
  if (out.X1 < 2.0) {
    throw ConfigError("ladder_from_T: P1 is empty (X1 = " + fmt(out.X1) + " < 2, no primes below X1)");
  }
  return out;
}

ParameterLadder with_sigma0(ParameterLadder ladder, double sigma0) {
  if (!(sigma0 > 0.5)) throw ConfigError("sigma0 override: off-axis shift must be positive (sigma0 > 1/2)");
  ladder.sigma0 = sigma0;
  return ladder;
}

std::uint64_t table_limit_for(const ParameterLadder& ladder) {
  const double x2 = ladder.X * ladder.X;
  return std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::ceil(x2)));
}

std::complex<double> mollifier_P(zeta::SPoint s0, double X, const nt::PrimeTable& table) {
  if (X < 2.0) throw DomainError("mollifier_P: X must be >= 2");
  if (!(s0.sigma > 0.0)) throw DomainError("mollifier_P: sigma must be positive");
  const double x2 = X * X;
  require_table(std::ceil(x2) - 1.0, table, "mollifier_P");
  const std::complex<double> s = s0.value();
  CompensatedComplexSum acc;
  for (const auto& pp : nt::prime_powers_below(x2, table)) {
    const double n = static_cast<double>(pp.n);
    const double weight = nt::lambda_X_taper(n, X) / static_cast<double>(pp.k);
    if (weight == 0.0) continue;
    acc.add(weight * std::exp(-s * std::log(n)));
  }
  return acc.value();
}

double prime_sum(zeta::SPoint s0, double lo, double hi, const nt::PrimeTable& table) {
  if (!(lo < hi)) throw DomainError("prime_sum: need lo < hi");
  require_table(hi, table, "prime_sum");
  const auto [first, last] = table.range(lo, hi);
  const auto primes = table.primes();
  CompensatedSum acc;
  for (std::size_t i = first; i < last; ++i) {
    const double lp = std::log(static_cast<double>(primes[i]));
    acc += std::exp(-s0.sigma * lp) * std::cos(s0.t * lp);
  }
  return acc.value();
}

DiscardDecomposition discard_decomposition(zeta::SPoint s0, double X, const nt::PrimeTable& table) {
  if (X < 2.0) throw DomainError("discard_decomposition: X must be >= 2");
  const double x2 = X * X;
  require_table(std::ceil(x2) - 1.0, table, "discard_decomposition");
  CompensatedSum primes, tapered, squares, higher;
  for (const auto& pp : nt::prime_powers_below(x2, table)) {
    const double n = static_cast<double>(pp.n);
    const double weight = nt::lambda_X_taper(n, X) / static_cast<double>(pp.k);
    if (weight == 0.0) continue;
    const double ln = std::log(n);
    const double term = weight * std::exp(-s0.sigma * ln) * std::cos(s0.t * ln);
    if (pp.k == 1) {
      (n <= X ? primes : tapered) += term;
    } else if (pp.k == 2) {
      squares += term;
    } else {
      higher += term;
    }
  }
  DiscardDecomposition out;
  out.primes = primes.value();
  out.tapered_primes = tapered.value();
  out.squares = squares.value();
  out.higher_powers = higher.value();
  out.re_mollifier = mollifier_P(s0, X, table).real();
  return out;
}

ChainEvaluator::ChainEvaluator(ParameterLadder ladder, const nt::PrimeTable& table, const zeta::EMConfig& cfg,
                               bool with_zeta)
    : ladder_(std::move(ladder)) {
  const double x2 = ladder_.X * ladder_.X;
  require_table(std::ceil(x2) - 1.0, table, "ChainEvaluator");
  if (with_zeta) {
    const std::array<double, 2> sigmas{0.5, ladder_.sigma0};
    zeta_.emplace(sigmas, 2.0 * ladder_.T, cfg);
  }

  std::vector<double> weights;
  for (const auto& pp : nt::prime_powers_below(x2, table)) {
    const double n = static_cast<double>(pp.n);
    const double taper = nt::lambda_X_taper(n, ladder_.X);
    if (taper == 0.0) continue;
    const double ln = std::log(n);
    mollifier_.log_n.push_back(ln);
    weights.push_back(taper / static_cast<double>(pp.k) * std::exp(-ladder_.sigma0 * ln));
  }
  mollifier_.weights.push_back(std::move(weights));

  const auto [first, last] = table.range(0.0, ladder_.X);
  const auto primes = table.primes();
  std::vector<double> pw;
  for (std::size_t i = first; i < last; ++i) {
    const double lp = std::log(static_cast<double>(primes[i]));
    primes_.log_n.push_back(lp);
    pw.push_back(std::exp(-ladder_.sigma0 * lp));
  }
  primes_.weights.push_back(std::move(pw));
  count_p1_ = table.range(0.0, ladder_.X1).second;
  count_p12_ = table.range(0.0, ladder_.X2).second;
}

ChainSample ChainEvaluator::evaluate_prime_stages(double tau) const {
  const double norm = ladder_.s_norm;
  const double p1 = real_prime_block(primes_, tau, 0, count_p1_);
  const double p2 = real_prime_block(primes_, tau, count_p1_, count_p12_);
  const double p3 = real_prime_block(primes_, tau, count_p12_, primes_.size());
  ChainSample out;
  out.tau = tau;
  out.p12 = (p1 + p2) / norm;
  out.p3 = p3 / norm;
  out.p = (p1 + p2 + p3) / norm;
  if (!std::isfinite(out.p) || !std::isfinite(out.p12)) out.flags |= kNonFinite;
  return out;
}

ChainSample ChainEvaluator::evaluate(double tau) const {
  if (!(tau >= ladder_.T && tau <= 2.0 * ladder_.T)) {
    throw PreconditionError("evaluate_chain: tau must lie in [T, 2T]");
  }
  if (!zeta_) throw PreconditionError("evaluate_chain: evaluator built without zeta stages");
  ChainSample out = evaluate_prime_stages(tau);
  const double norm = ladder_.s_norm;

  const auto z = zeta_->evaluate(tau);
  const double line = std::abs(z[0].value);
  const double off = std::abs(z[1].value);
  if (!(line >= zeta::kLogFloor)) out.flags |= kLineZero;
  if (!(off >= zeta::kLogFloor)) out.flags |= kOffZero;
  out.v = (out.flags & kLineZero) ? 0.0 : std::log(line) / norm;
  out.w = (out.flags & kOffZero) ? 0.0 : std::log(off) / norm;

  std::array<std::complex<double>, 1> moll{};
  kernels::parallel::dirichlet_sum(mollifier_, tau, mollifier_.size(), moll);
  out.x = moll[0].real() / norm;
  if (!std::isfinite(out.v) || !std::isfinite(out.w) || !std::isfinite(out.x)) out.flags |= kNonFinite;
  return out;
}

ChainSample evaluate_chain(double tau, const ParameterLadder& ladder, const nt::PrimeTable& table,
                           const zeta::EMConfig& cfg) {
  return ChainEvaluator(ladder, table, cfg).evaluate(tau);
}

}  // namespace sclt::chain
