#pragma once

// Dense pure-state simulator. Basis index bit q is the value of qubit q.
// Registers are contiguous runs of qubits described by QubitRange; the
// register's value inside a basis index is (index >> first) & mask.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrom/core/bits.hpp"
#include "qrom/core/random.hpp"
#include "qrom/qsim/oracle_table.hpp"
#include "qrom/qsim/query_trace.hpp"

namespace qrom::qsim {

using Amplitude = std::complex<double>;

inline constexpr unsigned kDefaultQubitCap = 24;
inline constexpr unsigned kHardQubitCap = 30;
inline constexpr double kNormTolerance = 1e-9;

struct QubitRange {
  unsigned first = 0;
  unsigned count = 0;

  constexpr unsigned end() const noexcept { return first + count; }
  constexpr std::uint64_t value_mask() const noexcept { return low_mask(count); }
  constexpr std::uint64_t index_mask() const noexcept { return low_mask(count) << first; }
  constexpr std::uint64_t extract(std::uint64_t index) const noexcept {
    return (index >> first) & value_mask();
  }
  constexpr bool overlaps(const QubitRange& o) const noexcept {
    return count != 0 && o.count != 0 && first < o.end() && o.first < end();
  }
  constexpr bool contains(unsigned qubit) const noexcept {
    return qubit >= first && qubit < end();
  }
};

class StateVector {
 public:
  /// |0...0> on `num_qubits` qubits.
  explicit StateVector(unsigned num_qubits, unsigned cap = kDefaultQubitCap)
      : num_qubits_(num_qubits) {
    if (cap > kHardQubitCap) throw std::invalid_argument("StateVector: cap above hard limit");
    if (num_qubits > cap)
      throw std::invalid_argument("StateVector: " + std::to_string(num_qubits) +
                                  " qubits exceeds cap " + std::to_string(cap));
    amps_.assign(std::size_t{1} << num_qubits, Amplitude{0.0, 0.0});
    amps_[0] = 1.0;
  }

  static StateVector basis(unsigned num_qubits, std::uint64_t index,
                           unsigned cap = kDefaultQubitCap) {
    StateVector s(num_qubits, cap);
    if (index >= s.dimension()) throw std::out_of_range("StateVector::basis: index");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
  }

  /// Takes ownership of explicit amplitudes; they must already be normalized.
  static StateVector from_amplitudes(std::vector<Amplitude> amps,
                                     unsigned cap = kDefaultQubitCap) {
    if (amps.empty() || (amps.size() & (amps.size() - 1)) != 0)
      throw std::invalid_argument("StateVector: amplitude count is not a power of two");
    const auto n = static_cast<unsigned>(std::countr_zero(amps.size()));
    StateVector s(0, cap);
    if (n > cap) throw std::invalid_argument("StateVector: exceeds qubit cap");
    s.num_qubits_ = n;
    s.amps_ = std::move(amps);
    if (!s.is_normalized()) throw std::invalid_argument("StateVector: amplitudes not normalized");
    return s;
  }

  /// Haar-like random state: i.i.d. complex Gaussian amplitudes, normalized.
  static StateVector random(unsigned num_qubits, Rng& rng, unsigned cap = kDefaultQubitCap) {
    StateVector s(num_qubits, cap);
    for (auto& a : s.amps_) {
      // Box-Muller on our own uniforms keeps streams platform-independent.
      const double u1 = 1.0 - uniform_unit(rng);
      const double u2 = uniform_unit(rng);
      const double r = std::sqrt(-2.0 * std::log(u1));
      a = Amplitude{r * std::cos(2 * std::numbers::pi * u2),
                    r * std::sin(2 * std::numbers::pi * u2)};
    }
    s.renormalize();
    return s;
  }

  unsigned num_qubits() const noexcept { return num_qubits_; }
  std::size_t dimension() const noexcept { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
  Amplitude amplitude(std::uint64_t index) const { return amps_.at(index); }

  double norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }
  bool is_normalized(double tol = kNormTolerance) const noexcept {
    return std::abs(norm_squared() - 1.0) <= tol;
  }
  void renormalize() {
    const double n = std::sqrt(norm_squared());
    if (n == 0.0) throw std::runtime_error("StateVector: cannot renormalize zero vector");
    for (auto& a : amps_) a /= n;
  }

  // ---- gates --------------------------------------------------------------

  /// Arbitrary single-qubit unitary [[u00, u01], [u10, u11]].
  void apply_single(unsigned qubit, const std::array<Amplitude, 4>& u) {
    check_qubit(qubit);
    const std::size_t stride = std::size_t{1} << qubit;
    for (std::size_t block = 0; block < amps_.size(); block += 2 * stride) {
      for (std::size_t off = 0; off < stride; ++off) {
        const std::size_t i = block + off;
        const std::size_t j = i + stride;
        const Amplitude a = amps_[i];
        const Amplitude b = amps_[j];
        amps_[i] = u[0] * a + u[1] * b;
        amps_[j] = u[2] * a + u[3] * b;
      }
    }
  }

  void hadamard(unsigned qubit) {
    const double h = std::numbers::sqrt2 / 2.0;
    apply_single(qubit, {h, h, h, -h});
  }
  void hadamard(QubitRange reg) {
    check_range(reg);
    for (unsigned q = reg.first; q < reg.end(); ++q) hadamard(q);
  }
  void pauli_x(unsigned qubit) {
    check_qubit(qubit);
    const std::size_t bit = std::size_t{1} << qubit;
    for (std::size_t i = 0; i < amps_.size(); ++i)
      if (!(i & bit)) std::swap(amps_[i], amps_[i | bit]);
  }
  void ry(unsigned qubit, double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    apply_single(qubit, {c, -s, s, c});
  }
  void rz(unsigned qubit, double theta) {
    apply_single(qubit, {std::polar(1.0, -theta / 2), 0.0, 0.0, std::polar(1.0, theta / 2)});
  }
  void cnot(unsigned control, unsigned target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) throw std::invalid_argument("cnot: control == target");
    const std::size_t c = std::size_t{1} << control, t = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps_.size(); ++i)
      if ((i & c) && !(i & t)) std::swap(amps_[i], amps_[i | t]);
  }

  /// Multiplies every basis amplitude whose register holds `value` by e^{i angle}.
  void phase_if(QubitRange reg, std::uint64_t value, double angle) {
    check_range(reg);
    const Amplitude f = std::polar(1.0, angle);
    for (std::size_t i = 0; i < amps_.size(); ++i)
      if (reg.extract(i) == value) amps_[i] *= f;
  }

  /// |v> -> |v xor value> on the register.
  void xor_constant(QubitRange reg, std::uint64_t value) {
    check_range(reg);
    require_width(value, reg.count, "xor_constant");
    const std::size_t shift = static_cast<std::size_t>(value) << reg.first;
    if (shift == 0) return;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      const std::size_t j = i ^ shift;
      if (j > i) std::swap(amps_[i], amps_[j]);
    }
  }

  /// Reflection 2|s><s| - I about the uniform superposition of the register,
  /// applied independently for every setting of the other qubits.
  void diffuse(QubitRange reg) {
    check_range(reg);
    const std::size_t low = std::size_t{1} << reg.first;
    const std::size_t span = std::size_t{1} << reg.count;
    const std::size_t high = amps_.size() >> reg.end();
    const double inv = 1.0 / static_cast<double>(span);
    for (std::size_t h = 0; h < high; ++h) {
      const std::size_t base = h << reg.end();
      for (std::size_t l = 0; l < low; ++l) {
        Amplitude mean = 0.0;
        for (std::size_t v = 0; v < span; ++v) mean += amps_[base | (v << reg.first) | l];
        mean *= inv;
        for (std::size_t v = 0; v < span; ++v) {
          auto& a = amps_[base | (v << reg.first) | l];
          a = 2.0 * mean - a;
        }
      }
    }
  }

  // ---- queries --------------------------------------------------------------

  /// Probability of each register value under a computational-basis measurement.
  std::vector<double> marginal(QubitRange reg) const {
    check_range(reg);
    std::vector<double> p(std::size_t{1} << reg.count, 0.0);
    for (std::size_t i = 0; i < amps_.size(); ++i) p[reg.extract(i)] += std::norm(amps_[i]);
    return p;
  }

  std::vector<double> probabilities() const {
    std::vector<double> p(amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
    return p;
  }

  QubitRange all() const noexcept { return {0, num_qubits_}; }

  void check_range(QubitRange reg) const {
    if (reg.end() > num_qubits_)
      throw std::out_of_range("qubit range [" + std::to_string(reg.first) + ", " +
                              std::to_string(reg.end()) + ") outside " +
                              std::to_string(num_qubits_) + "-qubit state");
  }

  // Raw mutable access for the oracle and measurement routines below.
  std::vector<Amplitude>& raw() noexcept { return amps_; }

 private:
  void check_qubit(unsigned q) const {
    if (q >= num_qubits_) throw std::out_of_range("qubit index " + std::to_string(q) + " out of range");
  }

  unsigned num_qubits_;
  std::vector<Amplitude> amps_;
};

/// |x>|y>|w> -> |x>|y xor O(x)>|w>. Appends one entry to `trace` (if given)
/// holding q_r for the input register before the call.
inline void apply_xor_oracle(StateVector& state, const OracleTable& oracle,
                             QubitRange in, QubitRange out, QueryTrace* trace = nullptr) {
  state.check_range(in);
  state.check_range(out);
  if (in.overlaps(out)) throw std::invalid_argument("apply_xor_oracle: registers overlap");
  if (in.count != oracle.in_bits() || out.count != oracle.out_bits())
    throw std::invalid_argument("apply_xor_oracle: register widths do not match oracle");

  auto& amps = state.raw();
  if (trace) {
    std::vector<double> mass(std::size_t{1} << in.count, 0.0);
    for (std::size_t i = 0; i < amps.size(); ++i) mass[in.extract(i)] += std::norm(amps[i]);
    trace->record(in.count, mass);
  }
  const auto rows = oracle.rows();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const std::uint64_t v = rows[in.extract(i)];
    if (v == 0) continue;
    const std::size_t j = i ^ (static_cast<std::size_t>(v) << out.first);
    if (j > i) std::swap(amps[i], amps[j]);
  }
}

/// Measures `reg` in the computational basis, collapses `state` onto the
/// outcome and renormalizes by the square root of the outcome's probability.
inline std::uint64_t partial_measure(StateVector& state, QubitRange reg, Rng& rng) {
  const auto probs = state.marginal(reg);
  double total = 0.0;
  for (double p : probs) total += p;
  if (!(total > 1e-300)) throw std::runtime_error("partial_measure: state has no mass");
  const double draw = uniform_unit(rng) * total;
  double acc = 0.0;
  std::uint64_t outcome = probs.size() - 1;
  for (std::size_t v = 0; v < probs.size(); ++v) {
    acc += probs[v];
    if (draw < acc && probs[v] > 0.0) {
      outcome = v;
      break;
    }
  }
  while (probs[outcome] == 0.0 && outcome > 0) --outcome;
  const double scale = 1.0 / std::sqrt(probs[outcome]);
  auto& amps = state.raw();
  for (std::size_t i = 0; i < amps.size(); ++i)
    amps[i] = reg.extract(i) == outcome ? amps[i] * scale : Amplitude{0.0, 0.0};
  return outcome;
}

/// (sum_x |a_x - b_x|^2)^(1/2)
inline double euclidean_distance(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("euclidean_distance: dimension mismatch");
  double s = 0.0;
  const auto aa = a.amplitudes();
  const auto bb = b.amplitudes();
  for (std::size_t i = 0; i < aa.size(); ++i) s += std::norm(aa[i] - bb[i]);
  return std::sqrt(s);
}

}  // namespace qrom::qsim
