#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qrom::qsim {

/// Input registers up to this width get the full per-input map recorded on
/// every query; wider ones record only the caller's watched set.
inline constexpr unsigned kFullTraceMaxInputBits = 12;

/// A (query index, input) pair: one element of a time-string set.
struct TimedInput {
  std::size_t query = 0;
  std::uint64_t input = 0;
};

/// Per-query record of the squared magnitude of each input in the oracle's
/// input register at the moment the oracle was applied.
class QueryTrace {
 public:
  struct Entry {
    std::size_t query = 0;
    unsigned in_bits = 0;
    double total = 0.0;                ///< sum over all inputs; 1 for a normalized state
    std::vector<double> full;          ///< empty when the register is too wide
    std::vector<std::pair<std::uint64_t, double>> watched;
  };

  QueryTrace() = default;
  explicit QueryTrace(std::vector<std::uint64_t> watched) : watched_(std::move(watched)) {
    std::sort(watched_.begin(), watched_.end());
    watched_.erase(std::unique(watched_.begin(), watched_.end()), watched_.end());
  }

  /// Appends one query. `per_input_mass[r]` is q_r of the current state.
  void record(unsigned in_bits, std::span<const double> per_input_mass) {
    Entry e;
    e.query = entries_.size();
    e.in_bits = in_bits;
    for (double m : per_input_mass) e.total += m;
    if (in_bits <= kFullTraceMaxInputBits)
      e.full.assign(per_input_mass.begin(), per_input_mass.end());
    for (auto r : watched_)
      if (r < per_input_mass.size()) e.watched.emplace_back(r, per_input_mass[r]);
    entries_.push_back(std::move(e));
  }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  const Entry& entry(std::size_t t) const { return entries_.at(t); }
  const std::vector<std::uint64_t>& watched() const noexcept { return watched_; }

  /// q_r at query t.
  double mass(std::size_t t, std::uint64_t r) const {
    const Entry& e = entries_.at(t);
    if (!e.full.empty()) {
      if (r >= e.full.size()) throw std::out_of_range("QueryTrace: input outside register");
      return e.full[r];
    }
    auto it = std::lower_bound(e.watched.begin(), e.watched.end(), r,
                               [](const auto& p, std::uint64_t v) { return p.first < v; });
    if (it == e.watched.end() || it->first != r)
      throw std::out_of_range("QueryTrace: input was not recorded");
    return it->second;
  }

  /// Total query probability of r: sum over all queries.
  double total_mass(std::uint64_t r) const {
    double s = 0.0;
    for (std::size_t t = 0; t < entries_.size(); ++t) s += mass(t, r);
    return s;
  }

  /// Sum of q_r over every query and every r in `inputs` (the same set at
  /// every query).
  double set_mass(std::span<const std::uint64_t> inputs) const {
    double s = 0.0;
    for (auto r : inputs) s += total_mass(r);
    return s;
  }

  /// Sum of q_r over an arbitrary set of (query, input) pairs.
  double pair_mass(std::span<const TimedInput> pairs) const {
    double s = 0.0;
    for (const auto& p : pairs) s += mass(p.query, p.input);
    return s;
  }

 private:
  std::vector<std::uint64_t> watched_;
  std::vector<Entry> entries_;
};

}  // namespace qrom::qsim
