#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace llema {

// All stochastic components draw from this engine. The helpers below avoid
// std::*_distribution so that streams are identical across standard libraries.
using Rng = std::mt19937_64;

// Uniform integer in [0, n) by rejection sampling. n must be positive.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = Rng::max() - (Rng::max() % n + 1) % n;
  std::uint64_t draw = rng();
  while (draw > limit) draw = rng();
  return draw % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) { return uniform_unit(rng) < p; }

// FNV-1a, 64 bit. Stable across platforms, used for seeded jitter.
constexpr std::uint64_t fnv1a(std::string_view text,
                              std::uint64_t hash = 14695981039346656037ull) noexcept {
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

// SplitMix64 finalizer; spreads a 64-bit key over all bits.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace llema
