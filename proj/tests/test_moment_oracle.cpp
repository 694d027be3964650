#include <cmath>
#include <vector>

#include "doctest.h"
#include "sclt/counter_rng.hpp"
#include "sclt/errors.hpp"
#include "sclt/moment_oracle.hpp"

using namespace sclt;
using namespace sclt::moments;

TEST_CASE("closed-form moments") {
  const auto table = nt::sieve_primes(1000);
  const double v = 0.5 * 1.8028172010488709;
  CHECK(closed_form_moment(0, 100, 0.5, table) == 1.0);
  CHECK(closed_form_moment(1, 100, 0.5, table) == doctest::Approx(v).epsilon(1e-14));
  CHECK(closed_form_moment(2, 100, 0.5, table) == doctest::Approx(3 * v * v).epsilon(1e-14));
  CHECK(closed_form_moment(1, 2, 0.5, table) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(closed_form_moment(3, 100, 0.5, table) == doctest::Approx(15 * v * v * v).epsilon(1e-14));
}

TEST_CASE("correction magnitudes") {
  const auto table = nt::sieve_primes(1000);
  const auto c1 = closed_form_corrections(1, 100, 0.5, 1e6, table);
  CHECK_FALSE(c1.lower_order_applicable);
  CHECK(c1.off_diagonal == doctest::Approx(100.0));
  const auto c3 = closed_form_corrections(3, 100, 0.5, 1e6, table);
  CHECK(c3.lower_order_applicable);
  CHECK(c3.off_diagonal == doctest::Approx(1e18));
}

TEST_CASE("random-phase oracle") {
  const auto table = nt::sieve_primes(1000);
  for (double X : {2.0, 6.0, 100.0}) {
    CHECK(random_phase_moment(1, X, 0.5, table) == doctest::Approx(nt::prime_variance(X, 0.5, table)).epsilon(1e-15));
  }
  const double s1 = 1.0 / 2 + 1.0 / 3 + 1.0 / 5;
  const double s2 = 1.0 / 4 + 1.0 / 9 + 1.0 / 25;
  const double hand = 3 * (s1 / 2) * (s1 / 2) - 0.375 * s2;
  CHECK(std::fabs(random_phase_moment(2, 6, 0.5, table) - hand) <= 1e-12);
  CHECK(std::fabs(hand - 0.6504166666666667) <= 1e-15);
  CHECK(random_phase_raw_moment(3, 100, 0.5, table) == 0.0);
  CHECK(random_phase_raw_moment(7, 6, 0.7, table) == 0.0);
  CHECK_THROWS_AS(random_phase_raw_moment(62, 100, 0.5, table), ResourceError);
}

TEST_CASE("random-phase oracle against Monte Carlo") {
  const auto table = nt::sieve_primes(100);
  const std::vector<double> a{std::pow(2.0, -0.6), std::pow(3.0, -0.6), std::pow(5.0, -0.6), std::pow(7.0, -0.6)};
  const std::size_t n = 400000;
  double m4 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double x = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) x += a[j] * std::cos(2 * M_PI * rng::uniform01(99, i, j));
    m4 += x * x * x * x;
  }
  m4 /= static_cast<double>(n);
  CHECK(std::fabs(m4 - random_phase_moment(2, 7, 0.6, table)) <= 0.02 * m4);
}

TEST_CASE("random-phase gap bounded by the lower-order term") {
  const auto table = nt::sieve_primes(1000);
  for (unsigned k = 2; k <= 3; ++k) {
    const double cf = closed_form_moment(k, 100, 0.5, table);
    const double rp = random_phase_moment(k, 100, 0.5, table);
    const auto c = closed_form_corrections(k, 100, 0.5, 1e6, table);
    CHECK(std::fabs(rp - cf) / cf <= c.lower_order / cf);
  }
}

TEST_CASE("empirical moments") {
  const std::vector<double> c(7, 1.5);
  CHECK(empirical_moment(c, 2) == doctest::Approx(2.25));
  const std::vector<double> pm{1, -1, 1, -1};
  CHECK(empirical_moment(pm, 1) == 0.0);
  const std::vector<double> w{1, 1, 1, 1};
  CHECK(empirical_moment(pm, w, 3) == 0.0);
  CHECK_THROWS_AS(empirical_moment(std::vector<double>{}, 2), DomainError);
  CHECK(moment_standard_error(pm, 1) == doctest::Approx(std::sqrt(4.0 / 3.0 / 4.0)));
}

TEST_CASE("quadrature and reports") {
  const auto q = trapezoid(10.0, 11);
  CHECK(q.nodes.front() == 10.0);
  CHECK(q.nodes.back() == 20.0);
  CHECK(q.weights.front() == 0.5);
  const auto r = make_report(2, 2.0, 1.9, 2.1, 5, {});
  CHECK(std::fabs(r.gap_cf_emp - 0.05) <= 1e-12);
  CHECK(std::fabs(r.gap_rp_cf - 0.05) <= 1e-12);
  CHECK_FALSE(r.invalid_regime);
}

TEST_CASE("prime sum on nodes") {
  const auto table = nt::sieve_primes(100);
  const std::vector<double> t{1e6, 1.5e6};
  const auto v = prime_sum_on_nodes(t, 31.6, 0.57, table);
  for (int i = 0; i < 2; ++i) {
    double ref = 0.0;
    for (std::uint32_t p : table.primes()) {
      if (p > 31.6) break;
      ref += std::pow(p, -0.57) * std::cos(t[i] * std::log(static_cast<double>(p)));
    }
    CHECK(std::fabs(v[i] - ref) <= 1e-12);
  }
}
