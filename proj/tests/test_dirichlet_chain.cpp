#include <cmath>
#include <complex>

#include "doctest.h"
#include "sclt/dirichlet_chain.hpp"
#include "sclt/errors.hpp"

using namespace sclt;
using namespace sclt::chain;

namespace {
ClampPolicy desk_policy() {
  ClampPolicy p;
  p.explicit_exponents = std::array<double, 3>{0.25, 0.10, 0.18};
  return p;
}
}  // namespace

TEST_CASE("explicit ladder at one million") {
  const auto l = ladder_from_T(1e6, desk_policy());
  CHECK(l.X == doctest::Approx(31.6227766));
  CHECK(l.X1 == doctest::Approx(3.98107171));
  CHECK(l.X2 == doctest::Approx(12.0226443));
  CHECK(l.sigma0 == doctest::Approx(0.5 + 1.0 / std::log(1e6)));
  CHECK(l.s_norm == doctest::Approx(std::sqrt(0.5 * std::log(std::log(1e6)))));
  CHECK(l.clamps.empty());
}

TEST_CASE("asymptotic ladder") {
  CHECK_THROWS_AS(ladder_from_T(1e6), ConfigError);
  const auto l = ladder_from_T(1e8);
  CHECK(l.X1 >= 550.0);
  CHECK(l.X1 <= 565.0);
  CHECK(l.X2 <= l.X);
  CHECK(l.X1 <= l.X2);
  CHECK(l.X * l.X <= static_cast<double>(kDefaultXSquaredCap) * (1 + 1e-12));
  CHECK_FALSE(l.clamps.empty());
}

TEST_CASE("ladder errors") {
  CHECK_THROWS_AS(ladder_from_T(500.0, desk_policy()), ConfigError);
  ClampPolicy tiny;
  tiny.explicit_exponents = std::array<double, 3>{0.25, 0.01, 0.18};
  try {
    (void)ladder_from_T(1e6, tiny);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("P1 is empty") != std::string::npos);
  }
  CHECK_THROWS_AS(with_sigma0(ladder_from_T(1e6, desk_policy()), 0.5), ConfigError);
}

TEST_CASE("mollifier values") {
  const auto table = nt::sieve_primes(1000);
  CHECK(std::abs(mollifier_P({1.0, 0.0}, 2.0, table) - 0.63834583309294794) <= 1e-14);
  CHECK(std::abs(mollifier_P({1.0, 0.0}, std::sqrt(6.0), table) - 0.85517770719085273) <= 1e-14);
  const auto a = mollifier_P({0.7, 33.0}, 20.0, table);
  const auto b = mollifier_P({0.7, -33.0}, 20.0, table);
  CHECK(std::abs(std::conj(a) - b) <= 1e-14);
  CHECK_THROWS_AS(mollifier_P({0.7, 0.0}, 40.0, table), DomainError);
}

TEST_CASE("prime sums") {
  const auto table = nt::sieve_primes(1000);
  CHECK(prime_sum({0.5, 0.0}, 0, 2, table) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(prime_sum({1.0, 0.0}, 0, 10, table) == doctest::Approx(1.176190476190476).epsilon(1e-14));
  const zeta::SPoint s{0.57, 1234.5};
  const double parts = prime_sum(s, 0, 4, table) + prime_sum(s, 4, 12, table) + prime_sum(s, 12, 31.6, table);
  CHECK(std::fabs(parts - prime_sum(s, 0, 31.6, table)) <= 1e-12);
  CHECK_THROWS_AS(prime_sum(s, 0, 2000, table), DomainError);
}

TEST_CASE("discard decomposition reassembles the mollifier") {
  const auto table = nt::sieve_primes(1000);
  const auto d = discard_decomposition({0.57, 4321.0}, 31.6, table);
  CHECK(std::fabs(d.primes + d.tapered_primes + d.squares + d.higher_powers - d.re_mollifier) <= 1e-12);
}

TEST_CASE("tapered mollifier bounded by the untapered sum") {
  const auto table = nt::sieve_primes(10000);
  const double sigma = 0.57;
  const double X = 100.0;
  double untapered = 0.0;
  for (const auto& pp : nt::prime_powers_below(X * X, table)) {
    untapered += std::pow(static_cast<double>(pp.n), -sigma) / static_cast<double>(pp.k);
  }
  for (double t : {0.0, 10.0, 999.0}) CHECK(std::fabs(mollifier_P({sigma, t}, X, table).real()) <= untapered);
}

TEST_CASE("chain samples") {
  const auto ladder = ladder_from_T(1e4, desk_policy());
  const auto table = nt::sieve_primes(table_limit_for(ladder));
  const ChainEvaluator ev(ladder, table, {});
  const auto a = ev.evaluate(15000.5);
  CHECK_FALSE(a.excluded());
  CHECK(std::isfinite(a.v));
  CHECK(std::isfinite(a.w));
  CHECK(std::fabs(a.p - (a.p12 + a.p3)) <= 1e-12);
  const double direct = prime_sum({ladder.sigma0, 15000.5}, 0, ladder.X, table) / ladder.s_norm;
  CHECK(std::fabs(a.p - direct) <= 1e-12);
  const auto mol = mollifier_P({ladder.sigma0, 15000.5}, ladder.X, table).real() / ladder.s_norm;
  CHECK(std::fabs(a.x - mol) <= 1e-12);
  const double w = zeta::log_abs_zeta({ladder.sigma0, 15000.5}).value / ladder.s_norm;
  CHECK(std::fabs(a.w - w) <= 1e-10);

  const auto b = evaluate_chain(15000.5, ladder, table, {});
  CHECK(a.v == b.v);
  CHECK(a.w == b.w);
  CHECK(a.x == b.x);
  CHECK(a.p == b.p);
  CHECK_THROWS_AS((void)ev.evaluate(5000.0), PreconditionError);
}

TEST_CASE("second moment of the prime sum on a fine grid") {
  const double T = 1e6;
  const double X = 100.0;
  const double s0 = 0.5 + 1.0 / std::log(T);
  const auto table = nt::sieve_primes(1000);
  const int nodes = 200001;
  double acc = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double t = T + T * i / (nodes - 1.0);
    const double p = prime_sum({s0, t}, 0, X, table);
    acc += (i == 0 || i == nodes - 1 ? 0.5 : 1.0) * p * p;
  }
  const double emp = acc / (nodes - 1.0);
  CHECK(std::fabs(emp - nt::prime_variance(X, s0, table)) <= 0.1 * nt::prime_variance(X, s0, table));
}
