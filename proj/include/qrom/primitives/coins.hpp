#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>

#include "qrom/core/random.hpp"

namespace qrom::primitives {

/// Source of 64-bit random words. Samplers take their randomness from one of
/// these so the same code runs on an RNG, on PRF output or on answers of a
/// classical random oracle.
using CoinSource = std::function<std::uint64_t()>;

inline CoinSource coins_from(Rng& rng) {
  return [&rng] { return rng(); };
}

/// Uniform value in [0, n) by rejection on whole coin words.
inline std::uint64_t coin_below(const CoinSource& coins, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("coin_below: empty range");
  if ((n & (n - 1)) == 0) return coins() & (n - 1);
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n + 1) % n;
  for (;;) {
    const std::uint64_t w = coins();
    if (w <= limit) return w % n;
  }
}

}  // namespace qrom::primitives
