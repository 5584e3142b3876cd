#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrom/core/bits.hpp"
#include "qrom/core/random.hpp"

namespace qrom::qsim {

/// Largest input width an explicit table may have. Matches the simulator's
/// qubit cap so every table can be queried in superposition.
inline constexpr unsigned kMaxTableInputBits = 24;

/// A total function {0,1}^in_bits -> {0,1}^out_bits stored row by row.
///
/// Tables are sealed at construction: there are no mutators, and the rows
/// live behind a shared pointer to const so copies are cheap and may be
/// shared across threads. Operations that "change" an oracle (resampling,
/// truncation) return a new table.
class OracleTable {
 public:
  OracleTable(unsigned in_bits, unsigned out_bits,
              std::vector<std::uint64_t> rows)
      : in_bits_(in_bits), out_bits_(out_bits) {
    if (in_bits > kMaxTableInputBits)
      throw std::invalid_argument("OracleTable: in_bits " +
                                  std::to_string(in_bits) + " exceeds cap");
    if (out_bits > 64) throw std::invalid_argument("OracleTable: out_bits > 64");
    if (rows.size() != (std::size_t{1} << in_bits))
      throw std::invalid_argument("OracleTable: table is not total");
    for (auto v : rows) require_width(v, out_bits, "OracleTable row");
    rows_ = std::make_shared<const std::vector<std::uint64_t>>(std::move(rows));
  }

  template <class F>
  static OracleTable from_function(unsigned in_bits, unsigned out_bits, F&& f) {
    if (in_bits > kMaxTableInputBits)
      throw std::invalid_argument("OracleTable: in_bits exceeds cap");
    std::vector<std::uint64_t> rows(std::size_t{1} << in_bits);
    for (std::size_t x = 0; x < rows.size(); ++x) rows[x] = f(static_cast<std::uint64_t>(x));
    return OracleTable(in_bits, out_bits, std::move(rows));
  }

  /// Uniformly random table: each row drawn independently.
  static OracleTable random(unsigned in_bits, unsigned out_bits, Rng& rng) {
    const auto mask = low_mask(out_bits);
    return from_function(in_bits, out_bits, [&](std::uint64_t) { return rng() & mask; });
  }

  unsigned in_bits() const noexcept { return in_bits_; }
  unsigned out_bits() const noexcept { return out_bits_; }
  std::size_t size() const noexcept { return rows_->size(); }
  std::span<const std::uint64_t> rows() const noexcept { return *rows_; }

  std::uint64_t query(std::uint64_t x) const {
    if (x >= rows_->size()) throw std::out_of_range("OracleTable: input outside domain");
    return (*rows_)[x];
  }
  std::uint64_t operator()(std::uint64_t x) const { return query(x); }

  /// Table of x -> leading `ell` bits of this table's output.
  OracleTable truncated(unsigned ell) const {
    return from_function(in_bits_, ell, [&](std::uint64_t x) {
      return leading_bits((*rows_)[x], out_bits_, ell);
    });
  }

  std::size_t count_equal(std::uint64_t value) const {
    return static_cast<std::size_t>(std::count(rows_->begin(), rows_->end(), value));
  }

  friend bool operator==(const OracleTable& a, const OracleTable& b) {
    return a.in_bits_ == b.in_bits_ && a.out_bits_ == b.out_bits_ &&
           (a.rows_ == b.rows_ || *a.rows_ == *b.rows_);
  }

 private:
  unsigned in_bits_;
  unsigned out_bits_;
  std::shared_ptr<const std::vector<std::uint64_t>> rows_;
};

/// New table equal to `oracle` off `points`, with fresh independent uniform
/// outputs on `points`.
inline OracleTable resample_oracle_at(const OracleTable& oracle,
                                      std::span<const std::uint64_t> points,
                                      Rng& rng) {
  std::vector<std::uint64_t> rows(oracle.rows().begin(), oracle.rows().end());
  const auto mask = low_mask(oracle.out_bits());
  for (auto x : points) {
    if (x >= rows.size()) throw std::out_of_range("resample_oracle_at: point outside domain");
    rows[x] = rng() & mask;
  }
  return OracleTable(oracle.in_bits(), oracle.out_bits(), std::move(rows));
}

/// Table whose rows are i.i.d. draws from `distribution` over
/// {0,1}^out_bits. An exactly uniform distribution takes the same sampler
/// path as OracleTable::random, so both produce identical tables from
/// identical streams.
inline OracleTable sample_near_uniform_oracle(unsigned in_bits, unsigned out_bits,
                                              std::span<const double> distribution,
                                              Rng& rng) {
  if (out_bits > 20)
    throw std::invalid_argument("sample_near_uniform_oracle: out_bits too large");
  const std::size_t range = std::size_t{1} << out_bits;
  if (distribution.size() != range)
    throw std::invalid_argument("sample_near_uniform_oracle: distribution size mismatch");
  double total = 0.0;
  for (double p : distribution) {
    if (p < 0.0) throw std::invalid_argument("sample_near_uniform_oracle: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("sample_near_uniform_oracle: distribution not normalized");

  const double u = 1.0 / static_cast<double>(range);
  const bool uniform = std::all_of(distribution.begin(), distribution.end(),
                                   [u](double p) { return p == u; });
  if (uniform) return OracleTable::random(in_bits, out_bits, rng);

  std::vector<double> cdf(range);
  std::partial_sum(distribution.begin(), distribution.end(), cdf.begin());
  std::uint64_t last_nonzero = range - 1;
  while (distribution[last_nonzero] == 0.0) --last_nonzero;
  return OracleTable::from_function(in_bits, out_bits, [&](std::uint64_t) {
    const double draw = uniform_unit(rng) * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), draw);
    // cdf[i-1] <= draw < cdf[i] implies distribution[i] > 0.
    return it == cdf.end() ? last_nonzero
                           : static_cast<std::uint64_t>(it - cdf.begin());
  });
}

}  // namespace qrom::qsim
