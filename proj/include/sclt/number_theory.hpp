#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace sclt::nt {

inline constexpr std::uint64_t kDefaultSieveCap = 1'000'000'000ULL;

/// Immutable table of all primes up to `limit`, produced by a segmented
/// sieve. Safe to share across threads once built.
class PrimeTable {
 public:
  PrimeTable(std::uint64_t limit, std::vector<std::uint32_t> primes);

  [[nodiscard]] std::uint64_t limit() const noexcept { return limit_; }
  [[nodiscard]] std::span<const std::uint32_t> primes() const noexcept { return primes_; }
  [[nodiscard]] std::size_t size() const noexcept { return primes_.size(); }

  [[nodiscard]] bool is_prime(std::uint64_t n) const;

  /// Least prime factor of n (n itself when n is prime, 1 for n = 1).
  /// Requires n <= limit^2 so trial division by table primes is complete.
  [[nodiscard]] std::uint64_t least_factor(std::uint64_t n) const;

  /// Index range [first, last) of primes p with lo < p <= hi.
  [[nodiscard]] std::pair<std::size_t, std::size_t> range(double lo, double hi) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> primes_;
};

/// Segmented sieve of Eratosthenes. Throws DomainError for limit < 2 and
/// ResourceError when limit exceeds `cap`.
PrimeTable sieve_primes(std::uint64_t limit, std::uint64_t cap = kDefaultSieveCap);

// On-disk cache: magic "SCLTPRIM", u64 limit, then the primes as u64, all
// little-endian.
void save_prime_cache(const PrimeTable& table, const std::filesystem::path& path);
PrimeTable load_prime_cache(const std::filesystem::path& path);

/// Λ(n): log p if n = p^k, else 0.
double von_mangoldt(std::uint64_t n);

/// Λ_X(n): Λ(n) for n <= X, Λ(n) log(X²/n)/log X for X < n <= X², 0 beyond.
double lambda_X(std::uint64_t n, double X);

/// Tapering factor applied to Λ(n) by lambda_X (1, linear-in-log, or 0).
double lambda_X_taper(double n, double X);

struct PrimePower {
  std::uint64_t n;
  std::uint32_t p;
  unsigned k;
};

/// All prime powers p^k with p^k < bound (strict), ordered by (p, k).
std::vector<PrimePower> prime_powers_below(double bound, const PrimeTable& table);

/// Σ_{lo < p <= hi} 1/p, compensated.
double reciprocal_prime_sum(double lo, double hi, const PrimeTable& table);

/// ½ Σ_{p <= X} p^{-2σ₀}, the variance scale of the real prime sum.
double prime_variance(double X, double sigma0, const PrimeTable& table);

}  // namespace sclt::nt
