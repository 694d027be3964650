#include <cmath>
#include <filesystem>
#include <vector>

#include "doctest.h"
#include "sclt/errors.hpp"
#include "sclt/number_theory.hpp"

using namespace sclt;
using namespace sclt::nt;

namespace {

// Plain trial-division prime list, independent of the segmented sieve.
std::vector<std::uint32_t> trial_primes(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t n = 2; n <= limit; ++n) {
    bool prime = true;
    for (std::uint32_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(n);
  }
  return out;
}

}  // namespace

TEST_CASE("sieve small limits") {
  auto t = sieve_primes(10);
  CHECK(std::vector<std::uint32_t>(t.primes().begin(), t.primes().end()) == std::vector<std::uint32_t>{2, 3, 5, 7});
  auto two = sieve_primes(2);
  REQUIRE(two.size() == 1);
  CHECK(two.primes()[0] == 2);
}

TEST_CASE("sieve matches trial division up to 1e5") {
  for (std::uint32_t limit : {3u, 97u, 1000u, 65536u, 100000u}) {
    auto t = sieve_primes(limit);
    const auto ref = trial_primes(limit);
    CHECK(std::vector<std::uint32_t>(t.primes().begin(), t.primes().end()) == ref);
  }
}

TEST_CASE("sieve count below one million") { CHECK(sieve_primes(1'000'000).size() == 78498); }

TEST_CASE("sieve errors") {
  CHECK_THROWS_AS(sieve_primes(1), DomainError);
  CHECK_THROWS_AS(sieve_primes(1000, 100), ResourceError);
}

TEST_CASE("prime table queries") {
  auto t = sieve_primes(100);
  CHECK(t.is_prime(97));
  CHECK_FALSE(t.is_prime(91));
  CHECK(t.is_prime(9973));  // beyond the limit, by trial division
  CHECK(t.least_factor(91) == 7);
  CHECK_THROWS_AS((void)t.least_factor(10001), DomainError);
  auto [a, b] = t.range(3, 11);
  CHECK(b - a == 3);  // 5, 7, 11
}

TEST_CASE("prime cache round trip") {
  auto t = sieve_primes(5000);
  const auto path = std::filesystem::temp_directory_path() / "sclt_prime_cache_test.bin";
  save_prime_cache(t, path);
  auto u = load_prime_cache(path);
  CHECK(u.limit() == t.limit());
  CHECK(std::equal(u.primes().begin(), u.primes().end(), t.primes().begin(), t.primes().end()));
  std::filesystem::remove(path);
}

TEST_CASE("von Mangoldt") {
  CHECK(von_mangoldt(4) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(von_mangoldt(6) == 0.0);
  CHECK(von_mangoldt(97) == doctest::Approx(std::log(97.0)).epsilon(1e-15));
  CHECK(von_mangoldt(1) == 0.0);
  CHECK(von_mangoldt(1024) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(von_mangoldt(0), DomainError);
}

TEST_CASE("tapered von Mangoldt") {
  CHECK(lambda_X(4, 100) == doctest::Approx(std::log(2.0)));
  CHECK(lambda_X(6, 100) == 0.0);
  CHECK(lambda_X(49, 7) == 0.0);  // n = X²
  CHECK(lambda_X(7, 7) == doctest::Approx(std::log(7.0)));
  CHECK(lambda_X(11, 7) == doctest::Approx(std::log(11.0) * std::log(49.0 / 11.0) / std::log(7.0)));
  CHECK_THROWS_AS(lambda_X(4, 1.5), DomainError);
}

TEST_CASE("tapered weight never exceeds the untapered one") {
  for (double X : {2.0, 3.5, 10.0, 31.6, 100.0}) {
    for (std::uint64_t n = 1; n <= 10000; ++n) {
      const double lam = von_mangoldt(n);
      const double tap = lambda_X(n, X);
      REQUIRE(tap <= lam + 1e-15);
      REQUIRE(tap >= 0.0);
    }
  }
}

TEST_CASE("taper is continuous at X and vanishes at X squared") {
  const double X = 10.0;
  CHECK(lambda_X_taper(X, X) == 1.0);
  CHECK(lambda_X_taper(X * (1 + 1e-12), X) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(lambda_X_taper(X * X * (1 - 1e-12), X) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(lambda_X_taper(X * X, X) == 0.0);
}

TEST_CASE("prime powers below a bound") {
  auto t = sieve_primes(100);
  auto pp = prime_powers_below(10, t);
  std::vector<std::uint64_t> ns;
  for (auto& x : pp) ns.push_back(x.n);
  std::sort(ns.begin(), ns.end());
  CHECK(ns == std::vector<std::uint64_t>{2, 3, 4, 5, 7, 8, 9});
}

TEST_CASE("reciprocal prime sums") {
  auto t = sieve_primes(1'000'000);
  CHECK(reciprocal_prime_sum(0, 10, t) == doctest::Approx(1.0 / 2 + 1.0 / 3 + 1.0 / 5 + 1.0 / 7).epsilon(1e-15));
  CHECK(reciprocal_prime_sum(0, 2, t) == 0.5);
  CHECK(reciprocal_prime_sum(0, 100, t) == doctest::Approx(1.8028172010488709).epsilon(1e-14));
  const double a = reciprocal_prime_sum(0, 1000, t) + reciprocal_prime_sum(1000, 54321.5, t);
  CHECK(std::fabs(a - reciprocal_prime_sum(0, 54321.5, t)) <= 1e-12);
  const double mertens = 0.2614972128476428;
  CHECK(std::fabs(reciprocal_prime_sum(0, 1e6, t) - std::log(std::log(1e6)) - mertens) <= 1e-3);
  CHECK_THROWS_AS(reciprocal_prime_sum(0, 2e6, t), DomainError);
}

TEST_CASE("prime variance") {
  auto t = sieve_primes(1000);
  CHECK(prime_variance(100, 0.5, t) == doctest::Approx(0.5 * 1.8028172010488709).epsilon(1e-14));
  CHECK(prime_variance(2, 0.5, t) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(prime_variance(100, 1.0, t) == doctest::Approx(0.2252143941318762).epsilon(1e-13));
  CHECK_THROWS_AS(prime_variance(100, 0.3, t), DomainError);
  CHECK_THROWS_AS(prime_variance(2000, 0.5, t), DomainError);
}
