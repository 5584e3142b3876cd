#pragma once

// Full Domain Hash over a trapdoor permutation, a PSF or a claw-free pair,
// and the Katz-Wang variant. Signatures are domain elements.

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "qrom/core/bits.hpp"
#include "qrom/core/random.hpp"
#include "qrom/primitives/clawfree.hpp"
#include "qrom/primitives/coins.hpp"
#include "qrom/primitives/psf.hpp"
#include "qrom/primitives/qprf.hpp"
#include "qrom/primitives/tdp.hpp"
#include "qrom/schemes/oracle.hpp"

namespace qrom::schemes {

/// sigma = f^{-1}(O(m)); valid iff f(sigma) = O(m).
class FdhScheme {
 public:
  explicit FdhScheme(primitives::TrapdoorPermutation tdp) : tdp_(std::move(tdp)) {}
  static FdhScheme keygen(unsigned domain_bits, std::uint64_t seed) {
    auto rng = make_rng(seed);
    return FdhScheme(primitives::table_tdp_gen(domain_bits, rng));
  }

  const primitives::TdpPublicKey& pk() const noexcept { return tdp_.pk; }
  const primitives::TrapdoorPermutation& tdp() const noexcept { return tdp_; }

  template <Oracle O>
  std::uint64_t sign(std::uint64_t m, O& oracle) const {
    return tdp_.f_inv(query_in_range(oracle, m, tdp_.domain_size(), "fdh sign"));
  }
  template <Oracle O>
  static bool verify(const primitives::TdpPublicKey& pk, std::uint64_t m, std::uint64_t sigma, O& oracle) {
    if (sigma >= pk.domain_size()) return false;
    return pk.f(sigma) == query_in_range(oracle, m, pk.domain_size(), "fdh verify");
  }
  template <Oracle O>
  bool verify(std::uint64_t m, std::uint64_t sigma, O& oracle) const {
    return verify(tdp_.pk, m, sigma, oracle);
  }

 private:
  primitives::TrapdoorPermutation tdp_;
};

/// FDH over a PSF with preimage sampling derandomized by a PRF of the
/// message: sign is a pure function of (sk, prf key, m, O).
class FdhPsfScheme {
 public:
  FdhPsfScheme(primitives::Psf psf, primitives::QprfKey prf_key)
      : psf_(std::move(psf)), prf_(prf_key, 64) {}

  const primitives::Psf& psf() const noexcept { return psf_; }

  /// Coin word i for message m.
  primitives::CoinSource coins_for(std::uint64_t m) const {
    return [prf = prf_, m, i = std::uint64_t{0}]() mutable { return prf.eval(splitmix64(m) + i++); };
  }

  template <Oracle O>
  std::uint64_t sign(std::uint64_t m, O& oracle) const {
    return psf_.f_inv(query_in_range(oracle, m, psf_.range_size, "fdh-psf sign"), coins_for(m));
  }
  template <Oracle O>
  bool verify(std::uint64_t m, std::uint64_t sigma, O& oracle) const {
    if (sigma >= psf_.domain_size) return false;
    return psf_.f(sigma) == query_in_range(oracle, m, psf_.range_size, "fdh-psf verify");
  }

 private:
  primitives::Psf psf_;
  primitives::Qprf prf_;
};

/// FDH with f = f1 of a claw-free pair; f2 is never used.
class ClawFreeFdhScheme {
 public:
  explicit ClawFreeFdhScheme(primitives::ClawFreePair pair) : pair_(std::move(pair)) {}

  const primitives::ClawFreePublicKey& pk() const noexcept { return pair_.pk(); }

  template <Oracle O>
  std::uint64_t sign(std::uint64_t m, O& oracle) const {
    return pair_.f1_inv(query_in_range(oracle, m, pair_.domain_size(), "claw-free fdh sign"));
  }
  template <Oracle O>
  static bool verify(const primitives::ClawFreePublicKey& pk, std::uint64_t m, std::uint64_t sigma, O& oracle) {
    if (sigma >= pk.domain_size()) return false;
    return pk.f1(sigma) == query_in_range(oracle, m, pk.domain_size(), "claw-free fdh verify");
  }
  template <Oracle O>
  bool verify(std::uint64_t m, std::uint64_t sigma, O& oracle) const {
    return verify(pair_.pk(), m, sigma, oracle);
  }

 private:
  primitives::ClawFreePair pair_;
};

/// sigma = f1^{-1}(O(b || m)) for a random bit b. The oracle input is
/// (b << msg_bits) | m. Verification accepts either branch.
class KatzWangScheme {
 public:
  KatzWangScheme(primitives::ClawFreePair pair, unsigned msg_bits) : pair_(std::move(pair)), msg_bits_(msg_bits) {
    if (msg_bits >= 63) throw std::invalid_argument("katz-wang: msg_bits must be < 63");
  }

  const primitives::ClawFreePublicKey& pk() const noexcept { return pair_.pk(); }
  unsigned msg_bits() const noexcept { return msg_bits_; }

  static std::uint64_t oracle_input(std::uint64_t b, std::uint64_t m, unsigned msg_bits) {
    return (b << msg_bits) | m;
  }

  struct Signed {
    std::uint64_t sigma;
    std::uint64_t branch;
  };

  template <Oracle O>
  Signed sign_with_branch(std::uint64_t m, O& oracle, Rng& rng) const {
    require_width(m, msg_bits_, "katz-wang message");
    const std::uint64_t b = random_bit(rng) ? 1 : 0;
    return {sign_branch(m, b, oracle), b};
  }
  template <Oracle O>
  std::uint64_t sign(std::uint64_t m, O& oracle, Rng& rng) const {
    return sign_with_branch(m, oracle, rng).sigma;
  }
  template <Oracle O>
  std::uint64_t sign_branch(std::uint64_t m, std::uint64_t b, O& oracle) const {
    return pair_.f1_inv(query_in_range(oracle, oracle_input(b, m, msg_bits_), pair_.domain_size(), "katz-wang sign"));
  }

  template <Oracle O>
  static bool verify(const primitives::ClawFreePublicKey& pk, unsigned msg_bits, std::uint64_t m,
                     std::uint64_t sigma, O& oracle) {
    if (sigma >= pk.domain_size()) return false;
    const auto img = pk.f1(sigma);
    for (std::uint64_t b = 0; b < 2; ++b)
      if (img == query_in_range(oracle, oracle_input(b, m, msg_bits), pk.domain_size(), "katz-wang verify"))
        return true;
    return false;
  }
  template <Oracle O>
  bool verify(std::uint64_t m, std::uint64_t sigma, O& oracle) const {
    return verify(pair_.pk(), msg_bits_, m, sigma, oracle);
  }

 private:
  primitives::ClawFreePair pair_;
  unsigned msg_bits_;
};

}  // namespace qrom::schemes
