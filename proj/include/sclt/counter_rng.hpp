#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

// Counter-based random numbers: every value is a pure function of
// (seed, index, stream), so parallel loops need no generator state.
namespace sclt::rng {

/// SplitMix64 finalizer applied to a combined key.
constexpr std::uint64_t mix(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1) + 0xD1B54A32D192ED03ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Uniform on [0, 1) with 53 random bits.
constexpr double uniform01(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0) noexcept {
  return static_cast<double>(mix(seed, index, stream) >> 11) * 0x1.0p-53;
}

/// Standard normal by Box–Muller on two independent streams.
inline double standard_normal(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0) noexcept {
  const double u1 = 1.0 - uniform01(seed, index, 2 * stream);  // (0, 1]
  const double u2 = uniform01(seed, index, 2 * stream + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace sclt::rng
