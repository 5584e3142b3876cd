#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrom/core/bits.hpp"
#include "qrom/core/random.hpp"

namespace qrom::primitives {

inline constexpr unsigned kMaxTdpDomainBits = 20;

using PermutationTable = std::shared_ptr<const std::vector<std::uint32_t>>;

struct TdpPublicKey {
  unsigned domain_bits = 0;
  PermutationTable forward;

  std::uint64_t domain_size() const noexcept { return std::uint64_t{1} << domain_bits; }
  std::uint64_t f(std::uint64_t x) const {
    if (x >= forward->size()) throw std::out_of_range("tdp f: input outside domain");
    return (*forward)[x];
  }
};

struct TdpSecretKey {
  unsigned domain_bits = 0;
  PermutationTable inverse;

  std::uint64_t f_inv(std::uint64_t y) const {
    if (y >= inverse->size()) throw std::out_of_range("tdp f_inv: input outside range");
    return (*inverse)[y];
  }
};

/// A trapdoor permutation on {0,1}^domain_bits given by an explicit table.
struct TrapdoorPermutation {
  TdpPublicKey pk;
  TdpSecretKey sk;

  unsigned domain_bits() const noexcept { return pk.domain_bits; }
  std::uint64_t domain_size() const noexcept { return pk.domain_size(); }
  std::uint64_t f(std::uint64_t x) const { return pk.f(x); }
  std::uint64_t f_inv(std::uint64_t y) const { return sk.f_inv(y); }
};

inline TrapdoorPermutation tdp_from_table(unsigned domain_bits, std::vector<std::uint32_t> forward) {
  if (domain_bits > kMaxTdpDomainBits)
    throw std::invalid_argument("tdp: domain_bits " + std::to_string(domain_bits) + " exceeds " +
                                std::to_string(kMaxTdpDomainBits));
  if (forward.size() != (std::size_t{1} << domain_bits))
    throw std::invalid_argument("tdp: table size mismatch");
  std::vector<std::uint32_t> inverse(forward.size(), 0);
  std::vector<bool> seen(forward.size(), false);
  for (std::size_t x = 0; x < forward.size(); ++x) {
    const auto y = forward[x];
    if (y >= forward.size() || seen[y]) throw std::invalid_argument("tdp: table is not a permutation");
    seen[y] = true;
    inverse[y] = static_cast<std::uint32_t>(x);
  }
  TrapdoorPermutation t;
  t.pk = {domain_bits, std::make_shared<const std::vector<std::uint32_t>>(std::move(forward))};
  t.sk = {domain_bits, std::make_shared<const std::vector<std::uint32_t>>(std::move(inverse))};
  return t;
}

/// Uniformly random permutation (Fisher-Yates) and its inverse table.
inline TrapdoorPermutation table_tdp_gen(unsigned domain_bits, Rng& rng) {
  if (domain_bits > kMaxTdpDomainBits)
    throw std::invalid_argument("table_tdp_gen: domain_bits " + std::to_string(domain_bits) +
                                " exceeds " + std::to_string(kMaxTdpDomainBits));
  std::vector<std::uint32_t> perm(std::size_t{1} << domain_bits);
  std::iota(perm.begin(), perm.end(), 0u);
  for (std::size_t i = perm.size(); i > 1; --i) {
    const auto j = uniform_below(rng, i);
    std::swap(perm[i - 1], perm[j]);
  }
  return tdp_from_table(domain_bits, std::move(perm));
}

}  // namespace qrom::primitives
