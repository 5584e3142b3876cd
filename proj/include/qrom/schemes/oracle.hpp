#pragma once

#include <concepts>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace qrom::schemes {

/// Anything answering classical queries x -> O(x). OracleTable, ClassicalRO
/// and FunctionOracle all qualify. Oracles are always passed explicitly.
template <class O>
concept Oracle = requires(O& o, std::uint64_t x) {
  { o.query(x) } -> std::convertible_to<std::uint64_t>;
};

class FunctionOracle {
 public:
  explicit FunctionOracle(std::function<std::uint64_t(std::uint64_t)> f) : f_(std::move(f)) {}
  std::uint64_t query(std::uint64_t x) const { return f_(x); }

 private:
  std::function<std::uint64_t(std::uint64_t)> f_;
};

/// Queries `oracle` and checks the answer lies in [0, range).
template <Oracle O>
std::uint64_t query_in_range(O& oracle, std::uint64_t x, std::uint64_t range, const char* who) {
  const std::uint64_t v = oracle.query(x);
  if (v >= range)
    throw std::invalid_argument(std::string(who) + ": oracle output " + std::to_string(v) +
                                " outside range of size " + std::to_string(range));
  return v;
}

}  // namespace qrom::schemes
