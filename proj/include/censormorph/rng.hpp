#pragma once

// Seedable generator with a documented stream-derivation hash, so Monte Carlo
// replications can run in any order and still reproduce bit-for-bit.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace censormorph {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Stream seed for (master seed, replication index, role label):
/// mix64(mix64(mix64(master) ^ replication) ^ fnv1a(label)).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replication,
                                    std::string_view label) noexcept {
  return mix64(mix64(mix64(master) ^ replication) ^ fnv1a(label));
}

/// mt19937_64 with distribution code owned here (the standard library's
/// distributions are not specified bit-for-bit across implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal by Box-Muller (one variate per call).
  double normal() noexcept {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace censormorph
