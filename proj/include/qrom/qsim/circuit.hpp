#pragma once

// Scripted oracle algorithms: a fixed list of gates and oracle calls over an
// input register, an output register and optional work qubits. Scripts are
// the adversaries and distinguishers used by the lemma experiments and the
// encryption games.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "qrom/core/random.hpp"
#include "qrom/qsim/oracle_table.hpp"
#include "qrom/qsim/query_trace.hpp"
#include "qrom/qsim/state_vector.hpp"

namespace qrom::qsim {

namespace gate {
struct H { unsigned q; };
struct X { unsigned q; };
struct Ry { unsigned q; double theta; };
struct Rz { unsigned q; double theta; };
struct Cnot { unsigned control; unsigned target; };
struct PhaseIf { QubitRange reg; std::uint64_t value; double angle; };
struct XorConst { QubitRange reg; std::uint64_t value; };
struct Diffuse { QubitRange reg; };
struct Query {};
}  // namespace gate

using Gate = std::variant<gate::H, gate::X, gate::Ry, gate::Rz, gate::Cnot, gate::PhaseIf,
                          gate::XorConst, gate::Diffuse, gate::Query>;

/// Oracle used at query t (0-based). Lets callers change the oracle between
/// queries, which is how time-dependent reprogramming is expressed.
using OracleSchedule = std::function<const OracleTable&(std::size_t t)>;

class Script {
 public:
  /// Qubits [0, in_bits) hold the oracle input, [in_bits, in_bits+out_bits)
  /// the oracle output, and the rest are work qubits.
  Script(unsigned in_bits, unsigned out_bits, unsigned work_bits = 0)
      : in_{0, in_bits}, out_{in_bits, out_bits}, work_{in_bits + out_bits, work_bits} {}

  QubitRange input() const noexcept { return in_; }
  QubitRange output() const noexcept { return out_; }
  QubitRange work() const noexcept { return work_; }
  unsigned num_qubits() const noexcept { return work_.end(); }
  std::size_t num_queries() const noexcept { return queries_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }

  Script& add(Gate g) {
    if (std::holds_alternative<gate::Query>(g)) ++queries_;
    gates_.push_back(g);
    return *this;
  }
  Script& h(unsigned q) { return add(gate::H{q}); }
  Script& h(QubitRange r) {
    for (unsigned q = r.first; q < r.end(); ++q) h(q);
    return *this;
  }
  Script& x(unsigned q) { return add(gate::X{q}); }
  Script& ry(unsigned q, double t) { return add(gate::Ry{q, t}); }
  Script& rz(unsigned q, double t) { return add(gate::Rz{q, t}); }
  Script& cnot(unsigned c, unsigned t) { return add(gate::Cnot{c, t}); }
  Script& phase_if(QubitRange r, std::uint64_t v, double a) { return add(gate::PhaseIf{r, v, a}); }
  Script& xor_const(QubitRange r, std::uint64_t v) { return add(gate::XorConst{r, v}); }
  Script& diffuse(QubitRange r) { return add(gate::Diffuse{r}); }
  Script& query() { return add(gate::Query{}); }

  /// Runs from |0...0>. If `stop_before_query` is set, returns the state
  /// just before that query (0-based) is applied.
  StateVector run(const OracleSchedule& oracle_at, QueryTrace* trace = nullptr,
                  std::size_t stop_before_query = SIZE_MAX) const {
    StateVector s(num_qubits());
    std::size_t t = 0;
    for (const auto& g : gates_) {
      if (std::holds_alternative<gate::Query>(g)) {
        if (t == stop_before_query) return s;
        apply_xor_oracle(s, oracle_at(t), in_, out_, trace);
        ++t;
      } else {
        apply_gate(s, g);
      }
    }
    return s;
  }

  StateVector run(const OracleTable& oracle, QueryTrace* trace = nullptr) const {
    return run([&](std::size_t) -> const OracleTable& { return oracle; }, trace);
  }

  /// Applies the gates to `s` in place; the script must be query-free.
  void apply_to(StateVector& s) const {
    if (queries_) throw std::logic_error("Script::apply_to: script has oracle queries");
    for (const auto& g : gates_) apply_gate(s, g);
  }

 private:
  static void apply_gate(StateVector& s, const Gate& g) {
    std::visit(
        [&](const auto& op) {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, gate::H>) s.hadamard(op.q);
          else if constexpr (std::is_same_v<T, gate::X>) s.pauli_x(op.q);
          else if constexpr (std::is_same_v<T, gate::Ry>) s.ry(op.q, op.theta);
          else if constexpr (std::is_same_v<T, gate::Rz>) s.rz(op.q, op.theta);
          else if constexpr (std::is_same_v<T, gate::Cnot>) s.cnot(op.control, op.target);
          else if constexpr (std::is_same_v<T, gate::PhaseIf>) s.phase_if(op.reg, op.value, op.angle);
          else if constexpr (std::is_same_v<T, gate::XorConst>) s.xor_constant(op.reg, op.value);
          else if constexpr (std::is_same_v<T, gate::Diffuse>) s.diffuse(op.reg);
        },
        g);
  }

  QubitRange in_, out_, work_;
  std::vector<Gate> gates_;
  std::size_t queries_ = 0;
};

/// A random layer: single-qubit rotations on every qubit plus a few CNOTs.
inline void append_random_layer(Script& s, Rng& rng) {
  const unsigned n = s.num_qubits();
  constexpr double two_pi = 6.283185307179586;
  for (unsigned q = 0; q < n; ++q) {
    s.ry(q, two_pi * uniform_unit(rng));
    s.rz(q, two_pi * uniform_unit(rng));
  }
  if (n >= 2) {
    for (unsigned i = 0; i < n; ++i) {
      const auto c = static_cast<unsigned>(uniform_below(rng, n));
      auto t = static_cast<unsigned>(uniform_below(rng, n - 1));
      if (t >= c) ++t;
      s.cnot(c, t);
    }
  }
}

/// Random T-query script: random layer, then T rounds of (query, random layer).
inline Script random_script(unsigned in_bits, unsigned out_bits, unsigned work_bits,
                            std::size_t queries, Rng& rng) {
  Script s(in_bits, out_bits, work_bits);
  append_random_layer(s, rng);
  for (std::size_t t = 0; t < queries; ++t) {
    s.query();
    append_random_layer(s, rng);
  }
  return s;
}

/// Exact output distribution of `script` (measuring `measured` at the end)
/// when every oracle row is drawn i.i.d. from `d`. Enumerates all
/// (2^out_bits)^(2^in_bits) tables, so only for tiny widths.
inline std::vector<double> exact_output_distribution(const Script& script,
                                                     std::span<const double> d,
                                                     QubitRange measured) {
  const unsigned in_bits = script.input().count;
  const unsigned out_bits = script.output().count;
  const std::size_t rows = std::size_t{1} << in_bits;
  const std::size_t values = std::size_t{1} << out_bits;
  if (d.size() != values) throw std::invalid_argument("exact_output_distribution: |d| mismatch");
  if (static_cast<double>(rows) * out_bits > 20)
    throw std::invalid_argument("exact_output_distribution: too many tables to enumerate");

  std::vector<double> out(std::size_t{1} << measured.count, 0.0);
  std::vector<std::uint64_t> table(rows, 0);
  const std::size_t total = std::size_t{1} << (rows * out_bits);
  for (std::size_t code = 0; code < total; ++code) {
    double weight = 1.0;
    for (std::size_t x = 0; x < rows; ++x) {
      table[x] = (code >> (x * out_bits)) & (values - 1);
      weight *= d[table[x]];
    }
    if (weight == 0.0) continue;
    const OracleTable oracle(in_bits, out_bits, table);
    const auto p = script.run(oracle).marginal(measured);
    for (std::size_t v = 0; v < p.size(); ++v) out[v] += weight * p[v];
  }
  return out;
}

}  // namespace qrom::qsim
