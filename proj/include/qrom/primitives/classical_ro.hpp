#pragma once

// Classical random oracle O_c with three interchangeable backings:
//   lazy   - answers sampled on first query from a seeded stream,
//   sealed - an explicit OracleTable,
//   keyed  - a Qprf view.
// The lazy value at x is a function of (seed, x) only, so the answer does not
// depend on the order in which inputs are first queried, and materializing
// the table before or after any queries yields the same function.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qrom/core/bits.hpp"
#include "qrom/core/random.hpp"
#include "qrom/primitives/qprf.hpp"
#include "qrom/qsim/oracle_table.hpp"

namespace qrom::primitives {

class ClassicalRO {
 public:
  enum class Backing { lazy, sealed, keyed };

  struct LogEntry {
    std::uint64_t input = 0;
    std::uint64_t output = 0;
  };

  /// Outputs uniform on [0, range) where range = 2^out_bits unless
  /// `range_size` is given (1 <= range_size <= 2^out_bits).
  static ClassicalRO lazy(unsigned in_bits, unsigned out_bits, std::uint64_t seed,
                          std::optional<std::uint64_t> range_size = std::nullopt) {
    ClassicalRO ro(Backing::lazy, in_bits, out_bits, range_size);
    ro.seed_ = seed;
    return ro;
  }

  static ClassicalRO sealed(qsim::OracleTable table) {
    ClassicalRO ro(Backing::sealed, table.in_bits(), table.out_bits(), std::nullopt);
    ro.table_ = std::move(table);
    return ro;
  }

  static ClassicalRO keyed(unsigned in_bits, Qprf prf) {
    ClassicalRO ro(Backing::keyed, in_bits, prf.out_bits(), std::nullopt);
    ro.prf_ = std::move(prf);
    return ro;
  }

  Backing backing() const noexcept { return backing_; }
  unsigned in_bits() const noexcept { return in_bits_; }
  unsigned out_bits() const noexcept { return out_bits_; }
  /// 0 encodes 2^64.
  std::uint64_t range_size() const noexcept { return range_; }

  /// Answers x and appends (x, answer) to the query log.
  std::uint64_t query(std::uint64_t x) {
    const auto v = value(x);
    log_.push_back({x, v});
    return v;
  }
  std::uint64_t operator()(std::uint64_t x) { return query(x); }

  const std::vector<LogEntry>& query_log() const noexcept { return log_; }
  void clear_log() { log_.clear(); }

  /// Number of lazily filled entries so far.
  std::size_t filled() const noexcept { return cache_.size(); }

  /// Full table, forcing every lazy entry. Does not touch the query log.
  qsim::OracleTable as_table() const {
    if (in_bits_ > qsim::kMaxTableInputBits)
      throw std::invalid_argument("ClassicalRO::as_table: domain of " + std::to_string(in_bits_) +
                                  " bits exceeds the simulator cap");
    if (backing_ == Backing::sealed) return *table_;
    return qsim::OracleTable::from_function(in_bits_, out_bits_, [this](std::uint64_t x) { return value(x); });
  }

  /// Same function, empty log and cache: for replaying queries in isolation.
  ClassicalRO replica() const {
    ClassicalRO r = *this;
    r.log_.clear();
    r.cache_.clear();
    return r;
  }

 private:
  ClassicalRO(Backing b, unsigned in_bits, unsigned out_bits, std::optional<std::uint64_t> range)
      : backing_(b), in_bits_(in_bits), out_bits_(out_bits) {
    if (in_bits > 64 || out_bits == 0 || out_bits > 64)
      throw std::invalid_argument("ClassicalRO: widths must be in_bits <= 64, 1 <= out_bits <= 64");
    const std::uint64_t full = out_bits == 64 ? 0 : (std::uint64_t{1} << out_bits);
    range_ = range.value_or(full);
    if (range) {
      if (*range == 0 || (full != 0 && *range > full))
        throw std::invalid_argument("ClassicalRO: range_size outside [1, 2^out_bits]");
      if (b != Backing::lazy && *range != full)
        throw std::invalid_argument("ClassicalRO: only lazy oracles take a custom range");
    }
  }

  std::uint64_t value(std::uint64_t x) const {
    if (in_bits_ < 64 && (x >> in_bits_) != 0)
      throw std::out_of_range("ClassicalRO: input outside " + std::to_string(in_bits_) + "-bit domain");
    switch (backing_) {
      case Backing::sealed: return table_->query(x);
      case Backing::keyed: return prf_->eval(x);
      case Backing::lazy: break;
    }
    if (auto it = cache_.find(x); it != cache_.end()) return it->second;
    // Reject on the narrowest mask covering the range: at most half the
    // draws are discarded.
    const auto mask = range_ == 0 ? low_mask(out_bits_) : low_mask(bit_length(range_ - 1));
    std::uint64_t v = 0;
    for (std::uint64_t counter = 0;; ++counter) {
      v = mix3(seed_, x, counter) & mask;
      if (range_ == 0 || v < range_) break;
    }
    cache_.emplace(x, v);
    return v;
  }

  Backing backing_;
  unsigned in_bits_;
  unsigned out_bits_;
  std::uint64_t range_ = 0;
  std::uint64_t seed_ = 0;
  std::optional<qsim::OracleTable> table_;
  std::optional<Qprf> prf_;
  mutable std::unordered_map<std::uint64_t, std::uint64_t> cache_;
  std::vector<LogEntry> log_;
};

}  // namespace qrom::primitives
