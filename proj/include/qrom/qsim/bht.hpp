#pragma once

// Collision search of Brassard, Hoyer and Tapp: query a random subset K of
// about cbrt(2^n) inputs classically, then Grover-search the rest of the
// domain for an input whose hash lands in H(K).
//
// Cost model: every classical evaluation of H, every Grover iteration and
// the final check of the measured input each charge one evaluation. The
// number of Grover iterations is fixed from the expected number of marked
// inputs, which the attacker can compute without extra queries.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qrom/core/random.hpp"
#include "qrom/qsim/grover.hpp"
#include "qrom/qsim/oracle_table.hpp"
#include "qrom/qsim/state_vector.hpp"

namespace qrom::qsim {

/// Documented constant c: a run never spends more than c * ceil(cbrt(2^n))
/// evaluations of H (checked for every n used in the test suite).
inline constexpr std::size_t kBhtEvaluationConstant = 2;

/// Smallest k with k^3 >= 2^bits.
inline std::size_t ceil_cbrt_pow2(unsigned bits) {
  const std::uint64_t target = std::uint64_t{1} << bits;
  std::uint64_t k = 1;
  while (k * k * k < target) ++k;
  return static_cast<std::size_t>(k);
}

struct Collision {
  std::uint64_t m = 0;
  std::uint64_t m_prime = 0;
};

struct BhtResult {
  std::optional<Collision> collision;
  std::size_t evaluations = 0;
  std::size_t subset_size = 0;
  std::size_t grover_iterations = 0;
};

/// `hash` maps in_bits to out_bits; out_bits plays the role of n.
inline BhtResult bht_collision(const OracleTable& hash, Rng& rng,
                               EvaluationCounter* counter = nullptr) {
  BhtResult res;
  auto charge = [&](std::size_t k) {
    res.evaluations += k;
    if (counter) counter->charge(k);
  };
  const std::size_t domain = hash.size();
  const std::size_t k_size = std::min(ceil_cbrt_pow2(hash.out_bits()), domain);
  res.subset_size = k_size;

  // K: k_size distinct uniform inputs, queried classically.
  std::unordered_set<std::uint64_t> in_k;
  std::vector<std::uint64_t> k_list;
  while (k_list.size() < k_size) {
    const auto x = uniform_below(rng, domain);
    if (in_k.insert(x).second) k_list.push_back(x);
  }
  std::unordered_map<std::uint64_t, std::uint64_t> image;  // H(M') -> M'
  for (auto x : k_list) {
    charge(1);
    const auto [it, fresh] = image.emplace(hash(x), x);
    if (!fresh) {
      res.collision = Collision{x, it->second};
      return res;
    }
  }
  if (k_size == domain) return res;

  const auto indicator = OracleTable::from_function(hash.in_bits(), 1, [&](std::uint64_t m) {
    return (!in_k.contains(m) && image.contains(hash.rows()[m])) ? 1u : 0u;
  });
  const double n_in = static_cast<double>(domain);
  const double expected_marked = (n_in - static_cast<double>(k_size)) *
                                 static_cast<double>(image.size()) /
                                 static_cast<double>(std::uint64_t{1} << hash.out_bits());
  res.grover_iterations = optimal_grover_iterations(n_in, std::min(n_in, expected_marked));

  auto state = grover_prepare(indicator, res.grover_iterations);
  charge(res.grover_iterations);
  const auto m = partial_measure(state, grover_layout(hash.in_bits()).input, rng);

  charge(1);
  if (!in_k.contains(m)) {
    if (auto it = image.find(hash(m)); it != image.end()) res.collision = Collision{m, it->second};
  }
  return res;
}

}  // namespace qrom::qsim
