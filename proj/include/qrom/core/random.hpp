#pragma once

// Seeded randomness. Every operation in the library takes an explicit Rng;
// nothing reads an ambient generator. Seeds for independent trials are
// derived with derive_seed() so trial t of a run with seed s always sees the
// same stream regardless of how trials are scheduled.

#include <cstdint>
#include <random>
#include <stdexcept>

namespace qrom {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// The documented seed splitter: seed ⊕ index pushed through two SplitMix
/// rounds. Used for per-trial and per-component seeds.
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::uint64_t index) noexcept {
  return splitmix64(seed ^ splitmix64(index ^ 0x5851f42d4c957f2dULL));
}

/// Three-input mix used by lazily sampled oracles: value(seed, x, counter).
constexpr std::uint64_t mix3(std::uint64_t seed, std::uint64_t x,
                             std::uint64_t counter) noexcept {
  return splitmix64(derive_seed(seed, x) ^ splitmix64(counter + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

/// Uniform integer in [0, n). Rejection sampling so results do not depend on
/// the standard library's distribution implementation.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: empty range");
  if ((n & (n - 1)) == 0) return rng() & (n - 1);
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n + 1) % n;
  for (;;) {
    const std::uint64_t w = rng();
    if (w <= limit) return w % n;
  }
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool random_bit(Rng& rng) { return (rng() >> 63) != 0; }

}  // namespace qrom
