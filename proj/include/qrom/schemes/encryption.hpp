#pragma once

// Bellare-Rogaway encryption E(m) = (f(r), O(r) xor m) and the hybrid scheme
// E(m) = (f(r), E_S(O(r), m)). Both draw r first from the caller's stream,
// so with the one-time pad as E_S the two produce identical ciphertexts.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qrom/core/bits.hpp"
#include "qrom/core/random.hpp"
#include "qrom/primitives/tdp.hpp"
#include "qrom/schemes/oracle.hpp"
#include "qrom/schemes/symmetric.hpp"

namespace qrom::schemes {

struct Ciphertext {
  std::uint64_t y = 0;
  SymCiphertext c;
  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

/// Field widths of a ciphertext; zero-width fields take no bytes.
struct CiphertextLayout {
  unsigned y_bits = 0;
  unsigned body_bits = 0;
  unsigned nonce_bits = 0;
  unsigned tag_bits = 0;
};

/// Fields in order y, body, nonce, tag; each little-endian in
/// ceil(width / 8) bytes.
inline std::vector<std::uint8_t> to_bytes(const Ciphertext& ct, const CiphertextLayout& lay) {
  std::vector<std::uint8_t> out;
  auto put = [&](std::uint64_t v, unsigned bits) {
    require_width(v, bits, "ciphertext field");
    for (unsigned i = 0; i < (bits + 7) / 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  put(ct.y, lay.y_bits);
  put(ct.c.body, lay.body_bits);
  put(ct.c.nonce, lay.nonce_bits);
  put(ct.c.tag, lay.tag_bits);
  return out;
}

class BrScheme {
 public:
  BrScheme(primitives::TrapdoorPermutation tdp, unsigned msg_bits) : tdp_(std::move(tdp)), msg_bits_(msg_bits) {
    if (msg_bits == 0 || msg_bits > 64) throw std::invalid_argument("br: msg_bits must be 1..64");
  }
  const primitives::TdpPublicKey& pk() const noexcept { return tdp_.pk; }
  unsigned msg_bits() const noexcept { return msg_bits_; }
  CiphertextLayout layout() const noexcept { return {tdp_.domain_bits(), msg_bits_, 0, 0}; }

  template <Oracle O>
  Ciphertext encrypt(std::uint64_t m, O& oracle, Rng& coins) const {
    require_width(m, msg_bits_, "br message");
    const auto r = uniform_below(coins, tdp_.domain_size());
    return {tdp_.f(r), {mask(oracle, r) ^ m, 0, 0}};
  }
  template <Oracle O>
  std::optional<std::uint64_t> decrypt(const Ciphertext& ct, O& oracle) const {
    if (ct.y >= tdp_.domain_size() || (ct.c.body >> msg_bits_) || ct.c.nonce || ct.c.tag)
      throw std::invalid_argument("br decrypt: malformed ciphertext");
    return mask(oracle, tdp_.f_inv(ct.y)) ^ ct.c.body;
  }

 private:
  template <Oracle O>
  std::uint64_t mask(O& oracle, std::uint64_t r) const {
    const auto v = oracle.query(r);
    require_width(v, msg_bits_, "br oracle output");
    return v;
  }
  primitives::TrapdoorPermutation tdp_;
  unsigned msg_bits_;
};

template <SymmetricScheme Sym>
class HybridScheme {
 public:
  HybridScheme(primitives::TrapdoorPermutation tdp, Sym sym) : tdp_(std::move(tdp)), sym_(std::move(sym)) {}
  const primitives::TdpPublicKey& pk() const noexcept { return tdp_.pk; }
  const Sym& sym() const noexcept { return sym_; }
  CiphertextLayout layout() const noexcept {
    return {tdp_.domain_bits(), sym_.msg_bits(), sym_.nonce_bits(), sym_.tag_bits()};
  }

  template <Oracle O>
  Ciphertext encrypt(std::uint64_t m, O& oracle, Rng& coins) const {
    const auto r = uniform_below(coins, tdp_.domain_size());
    return {tdp_.f(r), sym_.enc(key(oracle, r), m, coins)};
  }
  /// nullopt when the symmetric layer rejects.
  template <Oracle O>
  std::optional<std::uint64_t> decrypt(const Ciphertext& ct, O& oracle) const {
    if (ct.y >= tdp_.domain_size()) throw std::invalid_argument("hybrid decrypt: malformed ciphertext");
    return sym_.dec(key(oracle, tdp_.f_inv(ct.y)), ct.c);
  }

 private:
  template <Oracle O>
  std::uint64_t key(O& oracle, std::uint64_t r) const {
    const auto v = oracle.query(r);
    require_width(v, sym_.key_bits(), "hybrid oracle output");
    return v;
  }
  primitives::TrapdoorPermutation tdp_;
  Sym sym_;
};

}  // namespace qrom::schemes
