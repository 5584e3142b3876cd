#pragma once

// Keyed function standing in for a quantum-accessible PRF: the SipHash-2-4
// round structure applied to a single 64-bit input block. This is a
// statistical stand-in only; nothing here is a security claim.

#include <cstdint>
#include <stdexcept>

#include "qrom/core/bits.hpp"
#include "qrom/core/random.hpp"
#include "qrom/qsim/oracle_table.hpp"

namespace qrom::primitives {

struct QprfKey {
  std::uint64_t k0 = 0;
  std::uint64_t k1 = 0;
  unsigned bits = 128;  ///< key length n; bits beyond n must be zero

  static QprfKey random(unsigned bits, Rng& rng) {
    QprfKey k;
    k.bits = bits;
    k.k0 = rng() & low_mask(bits >= 64 ? 64 : bits);
    k.k1 = bits > 64 ? rng() & low_mask(bits - 64) : 0;
    return k;
  }
  QprfKey flipped(unsigned bit) const {
    if (bit >= bits) throw std::out_of_range("QprfKey::flipped: bit outside key");
    QprfKey k = *this;
    (bit < 64 ? k.k0 : k.k1) ^= std::uint64_t{1} << (bit % 64);
    return k;
  }
  friend bool operator==(const QprfKey&, const QprfKey&) = default;
};

class Qprf {
 public:
  Qprf(QprfKey key, unsigned out_bits) : key_(key), out_bits_(out_bits) {
    if (key.bits == 0 || key.bits > 128) throw std::invalid_argument("Qprf: key length must be 1..128");
    if (out_bits == 0 || out_bits > 64) throw std::invalid_argument("Qprf: out_bits must be 1..64");
    if ((key.bits < 64 && (key.k0 >> key.bits)) || (key.bits <= 64 && key.k1) ||
        (key.bits > 64 && key.bits < 128 && (key.k1 >> (key.bits - 64))))
      throw std::invalid_argument("Qprf: key has bits beyond its length");
  }

  const QprfKey& key() const noexcept { return key_; }
  unsigned out_bits() const noexcept { return out_bits_; }

  std::uint64_t eval(std::uint64_t x) const { return raw(x) & low_mask(out_bits_); }
  std::uint64_t operator()(std::uint64_t x) const { return eval(x); }

  /// The function x -> eval(x) on {0,1}^in_bits as a table that qsim can
  /// query in superposition.
  qsim::OracleTable table(unsigned in_bits) const {
    return qsim::OracleTable::from_function(in_bits, out_bits_, [this](std::uint64_t x) { return eval(x); });
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int b) { return (x << b) | (x >> (64 - b)); }

  std::uint64_t raw(std::uint64_t m) const {
    std::uint64_t v0 = key_.k0 ^ 0x736f6d6570736575ULL;
    std::uint64_t v1 = key_.k1 ^ 0x646f72616e646f6dULL;
    std::uint64_t v2 = key_.k0 ^ 0x6c7967656e657261ULL;
    std::uint64_t v3 = key_.k1 ^ 0x7465646279746573ULL;
    auto round = [&] {
      v0 += v1; v1 = rotl(v1, 13); v1 ^= v0; v0 = rotl(v0, 32);
      v2 += v3; v3 = rotl(v3, 16); v3 ^= v2;
      v0 += v3; v3 = rotl(v3, 21); v3 ^= v0;
      v2 += v1; v1 = rotl(v1, 17); v1 ^= v2; v2 = rotl(v2, 32);
    };
    const std::uint64_t blocks[2] = {m, std::uint64_t{8} << 56};
    for (auto b : blocks) {
      v3 ^= b;
      round();
      round();
      v0 ^= b;
    }
    v2 ^= 0xff;
    for (int i = 0; i < 4; ++i) round();
    return v0 ^ v1 ^ v2 ^ v3;
  }

  QprfKey key_;
  unsigned out_bits_;
};

inline std::uint64_t prf_eval(const QprfKey& key, std::uint64_t x, unsigned out_bits) {
  return Qprf(key, out_bits).eval(x);
}

}  // namespace qrom::primitives
