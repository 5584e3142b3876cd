#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>

#include "qrom/core/random.hpp"
#include "qrom/qsim/oracle_table.hpp"
#include "qrom/qsim/query_trace.hpp"
#include "qrom/qsim/state_vector.hpp"

namespace qrom::qsim {

/// floor((pi/4) sqrt(N/M)).
inline std::size_t optimal_grover_iterations(double n, double m) {
  if (!(m > 0.0) || !(n >= m)) throw std::invalid_argument("optimal_grover_iterations: need 0 < M <= N");
  return static_cast<std::size_t>(std::floor(std::numbers::pi / 4.0 * std::sqrt(n / m)));
}

/// sin^2((2k+1) theta), theta = arcsin sqrt(M/N).
inline double grover_success_probability(double n, double m, std::size_t k) {
  if (!(m >= 0.0) || !(n >= m) || !(n > 0.0))
    throw std::invalid_argument("grover_success_probability: need 0 <= M <= N");
  const double theta = std::asin(std::sqrt(m / n));
  const double s = std::sin((2.0 * static_cast<double>(k) + 1.0) * theta);
  return s * s;
}

/// Counts hash evaluations against an optional limit. Classical and quantum
/// evaluations are charged to the same counter.
class EvaluationCounter {
 public:
  explicit EvaluationCounter(std::size_t limit = std::numeric_limits<std::size_t>::max())
      : limit_(limit) {}
  void charge(std::size_t n = 1) { spent_ += n; }
  std::size_t spent() const noexcept { return spent_; }
  std::size_t limit() const noexcept { return limit_; }
  bool within_limit() const noexcept { return spent_ <= limit_; }

 private:
  std::size_t limit_;
  std::size_t spent_ = 0;
};

/// Input register [0, n) and the |-> ancilla at qubit n.
struct GroverLayout {
  QubitRange input;
  QubitRange ancilla;
};

inline GroverLayout grover_layout(unsigned in_bits) { return {{0, in_bits}, {in_bits, 1}}; }

/// State after `iterations` rounds of (phase oracle, diffusion) starting from
/// the uniform superposition. The phase oracle is the XOR oracle of
/// `indicator` acting on a |-> ancilla, so each round is one oracle call.
inline StateVector grover_prepare(const OracleTable& indicator, std::size_t iterations,
                                  QueryTrace* trace = nullptr) {
  if (indicator.out_bits() != 1) throw std::invalid_argument("grover: indicator must have out_bits = 1");
  const auto lay = grover_layout(indicator.in_bits());
  StateVector s(indicator.in_bits() + 1);
  s.pauli_x(lay.ancilla.first);
  s.hadamard(lay.ancilla.first);
  s.hadamard(lay.input);
  for (std::size_t k = 0; k < iterations; ++k) {
    apply_xor_oracle(s, indicator, lay.input, lay.ancilla, trace);
    s.diffuse(lay.input);
  }
  return s;
}

/// Draws one outcome from an explicit distribution.
inline std::uint64_t sample_index(std::span<const double> p, Rng& rng) {
  const double draw = uniform_unit(rng);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    last = i;
    acc += p[i];
    if (draw < acc) return i;
  }
  return last;
}

struct GroverResult {
  std::uint64_t outcome = 0;
  QueryTrace trace;
};

inline GroverResult grover_search(const OracleTable& indicator, std::size_t iterations, Rng& rng) {
  if (indicator.out_bits() != 1) throw std::invalid_argument("grover: indicator must have out_bits = 1");
  if (indicator.count_equal(1) == 0)
    throw std::invalid_argument("grover_search: indicator marks no element");
  GroverResult r;
  auto s = grover_prepare(indicator, iterations, &r.trace);
  r.outcome = partial_measure(s, grover_layout(indicator.in_bits()).input, rng);
  return r;
}

}  // namespace qrom::qsim
