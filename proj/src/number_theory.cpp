#include "sclt/number_theory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <string>

#include "sclt/errors.hpp"
#include "sclt/summation.hpp"

namespace sclt::nt {

namespace {

constexpr std::array<char, 8> kCacheMagic = {'S', 'C', 'L', 'T', 'P', 'R', 'I', 'M'};
constexpr std::size_t kSegmentBytes = std::size_t{1} << 18;

std::vector<std::uint32_t> simple_sieve(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

void write_u64(std::ostream& os, std::uint64_t v) {
  std::array<unsigned char, 8> buf{};
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(buf.data()), 8);
}

bool read_u64(std::istream& is, std::uint64_t& v) {
  std::array<unsigned char, 8> buf{};
  if (!is.read(reinterpret_cast<char*>(buf.data()), 8)) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{buf[i]} << (8 * i);
  return true;
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

PrimeTable::PrimeTable(std::uint64_t limit, std::vector<std::uint32_t> primes)
    : limit_(limit), primes_(std::move(primes)) {}

bool PrimeTable::is_prime(std::uint64_t n) const {
  if (n <= limit_) return std::binary_search(primes_.begin(), primes_.end(), n);
  return n >= 2 && least_factor(n) == n;
}

std::uint64_t PrimeTable::least_factor(std::uint64_t n) const {
  if (n < 2) return n;
  if (n > limit_ * limit_) {
    throw DomainError("least_factor: n=" + std::to_string(n) + " exceeds limit^2 of the prime table");
  }
  for (std::uint32_t p : primes_) {
    const std::uint64_t pp = p;
    if (pp * pp > n) break;
    if (n % pp == 0) return pp;
  }
  return n;
}

std::pair<std::size_t, std::size_t> PrimeTable::range(double lo, double hi) const {
  auto first = std::upper_bound(primes_.begin(), primes_.end(), lo,
                                [](double v, std::uint32_t p) { return v < static_cast<double>(p); });
  auto last = std::upper_bound(primes_.begin(), primes_.end(), hi,
                               [](double v, std::uint32_t p) { return v < static_cast<double>(p); });
  if (last < first) last = first;
  return {static_cast<std::size_t>(first - primes_.begin()),
          static_cast<std::size_t>(last - primes_.begin())};
}

PrimeTable sieve_primes(std::uint64_t limit, std::uint64_t cap) {
  if (limit < 2) throw DomainError("sieve_primes: limit must be >= 2");
  if (limit > cap) {
    throw ResourceError("sieve_primes: limit " + std::to_string(limit) + " exceeds the sieve cap " +
                        std::to_string(cap));
  }
  if (limit > 0xFFFFFFFFULL) throw ResourceError("sieve_primes: limit exceeds 32-bit prime storage");

  const std::uint64_t root = isqrt(limit);
  const std::vector<std::uint32_t> base = simple_sieve(std::max<std::uint64_t>(root, 2));

  std::vector<std::uint32_t> primes;
  const double est = static_cast<double>(limit) / std::max(1.0, std::log(static_cast<double>(limit)) - 1.1);
  primes.reserve(static_cast<std::size_t>(est * 1.02) + 16);

  std::vector<unsigned char> seg(kSegmentBytes);
  for (std::uint64_t low = 2; low <= limit; low += kSegmentBytes) {
    const std::uint64_t high = std::min<std::uint64_t>(low + kSegmentBytes - 1, limit);
    const std::size_t len = static_cast<std::size_t>(high - low + 1);
    std::fill(seg.begin(), seg.begin() + static_cast<std::ptrdiff_t>(len), 1);
    for (std::uint32_t p32 : base) {
      const std::uint64_t p = p32;
      if (p * p > high) break;
      std::uint64_t start = std::max(p * p, (low + p - 1) / p * p);
      for (std::uint64_t j = start; j <= high; j += p) seg[j - low] = 0;
    }
    for (std::size_t i = 0; i < len; ++i) {
      if (seg[i]) primes.push_back(static_cast<std::uint32_t>(low + i));
    }
  }
  primes.shrink_to_fit();
  return PrimeTable(limit, std::move(primes));
}

void save_prime_cache(const PrimeTable& table, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_prime_cache: cannot open " + path.string());
  os.write(kCacheMagic.data(), kCacheMagic.size());
  write_u64(os, table.limit());
  for (std::uint32_t p : table.primes()) write_u64(os, p);
  if (!os) throw std::runtime_error("save_prime_cache: write failed for " + path.string());
}

PrimeTable load_prime_cache(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_prime_cache: cannot open " + path.string());
  std::array<char, 8> magic{};
  std::uint64_t limit = 0;
  if (!is.read(magic.data(), magic.size()) || magic != kCacheMagic || !read_u64(is, limit)) {
    throw std::runtime_error("load_prime_cache: bad header in " + path.string());
  }
  std::vector<std::uint32_t> primes;
  std::uint64_t v = 0;
  while (read_u64(is, v)) {
    if (v > limit || (!primes.empty() && v <= primes.back())) {
      throw std::runtime_error("load_prime_cache: corrupt prime sequence in " + path.string());
    }
    primes.push_back(static_cast<std::uint32_t>(v));
  }
  return PrimeTable(limit, std::move(primes));
}

double von_mangoldt(std::uint64_t n) {
  if (n == 0) throw DomainError("von_mangoldt: n must be >= 1");
  if (n == 1) return 0.0;
  std::uint64_t p = 0;
  if (n % 2 == 0) {
    p = 2;
  } else {
    for (std::uint64_t d = 3; d * d <= n; d += 2) {
      if (n % d == 0) {
        p = d;
        break;
      }
    }
    if (p == 0) p = n;
  }
  std::uint64_t m = n;
  while (m % p == 0) m /= p;
  return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

double lambda_X_taper(double n, double X) {
  if (X < 2.0) throw DomainError("lambda_X: X must be >= 2");
  if (n <= X) return 1.0;
  const double x2 = X * X;
  if (n >= x2) return 0.0;
  return std::log(x2 / n) / std::log(X);
}

double lambda_X(std::uint64_t n, double X) {
  const double taper = lambda_X_taper(static_cast<double>(n), X);
  if (taper == 0.0) return 0.0;
  return von_mangoldt(n) * taper;
}

std::vector<PrimePower> prime_powers_below(double bound, const PrimeTable& table) {
  std::vector<PrimePower> out;
  if (bound <= 2.0) return out;
  if (bound - 1.0 > static_cast<double>(table.limit())) {
    throw DomainError("prime_powers_below: bound exceeds the prime table limit " +
                      std::to_string(table.limit()));
  }
  for (std::uint32_t p : table.primes()) {
    if (static_cast<double>(p) >= bound) break;
    std::uint64_t n = p;
    for (unsigned k = 1; static_cast<double>(n) < bound; ++k) {
      out.push_back({n, p, k});
      if (n > (~std::uint64_t{0}) / p) break;
      n *= p;
    }
  }
  return out;
}

double reciprocal_prime_sum(double lo, double hi, const PrimeTable& table) {
  if (!(lo >= 0.0) || !(lo < hi)) throw DomainError("reciprocal_prime_sum: need 0 <= lo < hi");
  if (hi > static_cast<double>(table.limit())) {
    throw DomainError("reciprocal_prime_sum: hi exceeds prime table limit " + std::to_string(table.limit()));
  }
  const auto [first, last] = table.range(lo, hi);
  const auto primes = table.primes();
  CompensatedSum acc;
  for (std::size_t i = first; i < last; ++i) acc += 1.0 / static_cast<double>(primes[i]);
  return acc.value();
}

double prime_variance(double X, double sigma0, const PrimeTable& table) {
  if (!(sigma0 >= 0.5 && sigma0 <= 1.0)) throw DomainError("prime_variance: sigma0 must lie in [1/2, 1]");
  if (X > static_cast<double>(table.limit())) {
    throw DomainError("prime_variance: X exceeds prime table limit " + std::to_string(table.limit()));
  }
  const auto [first, last] = table.range(0.0, X);
  const auto primes = table.primes();
  CompensatedSum acc;
  for (std::size_t i = first; i < last; ++i) {
    acc += std::exp(-2.0 * sigma0 * std::log(static_cast<double>(primes[i])));
  }
  return 0.5 * acc.value();
}

}  // namespace sclt::nt
