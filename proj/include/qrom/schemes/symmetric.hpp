#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "qrom/core/bits.hpp"
#include "qrom/core/random.hpp"
#include "qrom/primitives/qprf.hpp"

namespace qrom::schemes {

struct SymCiphertext {
  std::uint64_t body = 0;
  std::uint64_t nonce = 0;
  std::uint64_t tag = 0;
  friend bool operator==(const SymCiphertext&, const SymCiphertext&) = default;
};

template <class S>
concept SymmetricScheme = requires(const S& s, std::uint64_t k, std::uint64_t m, Rng& rng, const SymCiphertext& c) {
  { s.key_bits() } -> std::convertible_to<unsigned>;
  { s.msg_bits() } -> std::convertible_to<unsigned>;
  { s.nonce_bits() } -> std::convertible_to<unsigned>;
  { s.tag_bits() } -> std::convertible_to<unsigned>;
  { s.enc(k, m, rng) } -> std::same_as<SymCiphertext>;
  { s.dec(k, c) } -> std::same_as<std::optional<std::uint64_t>>;
};

/// E_S(k, m) = k xor m. Draws no coins.
class OneTimePad {
 public:
  explicit OneTimePad(unsigned bits) : bits_(bits) {
    if (bits == 0 || bits > 64) throw std::invalid_argument("one-time pad: bits must be 1..64");
  }
  unsigned key_bits() const noexcept { return bits_; }
  unsigned msg_bits() const noexcept { return bits_; }
  unsigned nonce_bits() const noexcept { return 0; }
  unsigned tag_bits() const noexcept { return 0; }

  SymCiphertext enc(std::uint64_t k, std::uint64_t m, Rng&) const { return {xor_checked(k, m), 0, 0}; }
  std::optional<std::uint64_t> dec(std::uint64_t k, const SymCiphertext& c) const {
    return xor_checked(k, c.body);
  }

 private:
  std::uint64_t xor_checked(std::uint64_t k, std::uint64_t m) const {
    require_width(k, bits_, "one-time pad key");
    require_width(m, bits_, "one-time pad message");
    return k ^ m;
  }
  unsigned bits_;
};

/// XOR with a PRF pad under a random nonce, plus a PRF tag over
/// (nonce, body). A 64-bit key is split into independent encryption and
/// MAC keys. Decryption returns nullopt on a bad tag.
class AuthenticatedXor {
 public:
  static constexpr unsigned kNonceBits = 16;
  static constexpr unsigned kTagBits = 32;

  explicit AuthenticatedXor(unsigned msg_bits) : msg_bits_(msg_bits) {
    if (msg_bits == 0 || msg_bits > 32) throw std::invalid_argument("authenticated xor: msg_bits must be 1..32");
  }
  unsigned key_bits() const noexcept { return 64; }
  unsigned msg_bits() const noexcept { return msg_bits_; }
  unsigned nonce_bits() const noexcept { return kNonceBits; }
  unsigned tag_bits() const noexcept { return kTagBits; }

  SymCiphertext enc(std::uint64_t k, std::uint64_t m, Rng& rng) const {
    require_width(m, msg_bits_, "authenticated xor message");
    SymCiphertext c;
    c.nonce = rng() & low_mask(kNonceBits);
    c.body = m ^ pad(k, c.nonce);
    c.tag = tag(k, c.nonce, c.body);
    return c;
  }
  std::optional<std::uint64_t> dec(std::uint64_t k, const SymCiphertext& c) const {
    if ((c.body >> msg_bits_) || (c.nonce >> kNonceBits) || (c.tag >> kTagBits)) return std::nullopt;
    if (tag(k, c.nonce, c.body) != c.tag) return std::nullopt;
    return c.body ^ pad(k, c.nonce);
  }

 private:
  static primitives::Qprf prf(std::uint64_t k, std::uint64_t domain_sep, unsigned out) {
    return primitives::Qprf({k, domain_sep, 128}, out);
  }
  std::uint64_t pad(std::uint64_t k, std::uint64_t nonce) const { return prf(k, 1, msg_bits_).eval(nonce); }
  std::uint64_t tag(std::uint64_t k, std::uint64_t nonce, std::uint64_t body) const {
    return prf(k, 2, kTagBits).eval((nonce << 32) | body);
  }

  unsigned msg_bits_;
};

}  // namespace qrom::schemes
