#pragma once

// Grover closed-form grid and BHT collision runs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qrom/core/random.hpp"
#include "qrom/experiments/rates.hpp"
#include "qrom/qsim/bht.hpp"
#include "qrom/qsim/grover.hpp"
#include "qrom/qsim/oracle_table.hpp"

namespace qrom::experiments {

struct GroverCell {
  unsigned in_bits = 0;
  std::size_t n = 0;
  std::size_t marked = 0;
  std::size_t iterations = 0;
  RateCheck check;
};

/// Indicator over 2^in_bits inputs with `marked` uniformly placed ones.
inline qsim::OracleTable random_indicator(unsigned in_bits, std::size_t marked, Rng& rng) {
  std::vector<std::uint64_t> rows(std::size_t{1} << in_bits, 0);
  for (std::size_t placed = 0; placed < marked;) {
    auto& r = rows[uniform_below(rng, rows.size())];
    if (!r) {
      r = 1;
      ++placed;
    }
  }
  return qsim::OracleTable(in_bits, 1, std::move(rows));
}

/// For N in {4, 16, 256, 1024}, a few M, and k in {0, 1, 2, optimal}:
/// prepare once, measure `trials` times, and compare the success frequency
/// with sin^2((2k+1) theta) at 3 sigma.
inline std::vector<GroverCell> grover_grid(std::size_t trials, std::uint64_t seed) {
  std::vector<GroverCell> cells;
  std::size_t idx = 0;
  for (unsigned in_bits : {2u, 4u, 8u, 10u}) {
    const std::size_t n = std::size_t{1} << in_bits;
    std::vector<std::size_t> ms{1, n / 4};
    if (n >= 16) ms.push_back(3);
    for (std::size_t m : ms) {
      std::vector<std::size_t> ks{0, 1, 2, qsim::optimal_grover_iterations(double(n), double(m))};
      std::sort(ks.begin(), ks.end());
      ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
      for (std::size_t k : ks) {
        auto rng = make_rng(derive_seed(seed, idx++));
        const auto ind = random_indicator(in_bits, m, rng);
        const auto state = qsim::grover_prepare(ind, k);
        const auto p = state.marginal(qsim::grover_layout(in_bits).input);
        Proportion hits;
        for (std::size_t t = 0; t < trials; ++t) hits.add(ind(qsim::sample_index(p, rng)) == 1);
        const double expected = qsim::grover_success_probability(double(n), double(m), k);
        cells.push_back({in_bits, n, m, k,
                         rate_check("grover", "N=" + std::to_string(n) + " M=" + std::to_string(m) +
                                                  " k=" + std::to_string(k),
                                    expected, hits, 3.0)});
      }
    }
  }
  return cells;
}

/// |amplitude of the marked item| for N = 4, M = 1, k = 1 (exactly 1).
inline double grover_n4_marked_amplitude() {
  const qsim::OracleTable ind(2, 1, {0, 0, 1, 0});
  const auto s = qsim::grover_prepare(ind, 1);
  // Ancilla is |-> on qubit 2: the marked input carries all the mass.
  const double a0 = std::abs(s.amplitude(2));
  const double a1 = std::abs(s.amplitude(2 | 4));
  return std::sqrt(a0 * a0 + a1 * a1);
}

struct BhtStats {
  unsigned ell = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t invalid_outputs = 0;  ///< returned pairs that are not collisions
  std::size_t max_evaluations = 0;
  std::size_t evaluation_limit = 0;
  double success_rate() const { return trials ? double(successes) / double(trials) : 0.0; }
  bool pass() const {
    return success_rate() >= 0.5 && invalid_outputs == 0 && max_evaluations <= evaluation_limit;
  }
};

/// BHT on fresh random ell -> ell tables.
inline BhtStats bht_experiment(unsigned ell, std::size_t trials, std::uint64_t seed) {
  BhtStats st;
  st.ell = ell;
  st.trials = trials;
  st.evaluation_limit = qsim::kBhtEvaluationConstant * qsim::ceil_cbrt_pow2(ell);
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = make_rng(derive_seed(seed, t));
    const auto h = qsim::OracleTable::random(ell, ell, rng);
    const auto res = qsim::bht_collision(h, rng);
    st.max_evaluations = std::max(st.max_evaluations, res.evaluations);
    if (!res.collision) continue;
    const auto [a, b] = *res.collision;
    if (a != b && h(a) == h(b)) ++st.successes;
    else ++st.invalid_outputs;
  }
  return st;
}

}  // namespace qrom::experiments
