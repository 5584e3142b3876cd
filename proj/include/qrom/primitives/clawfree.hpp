#pragma once

// Squaring claw-free pair over a Blum integer N = p*q, p = q = 3 (mod 4):
// f1(x) = x^2 and f2(x) = 4x^2 (mod N), both permutations of the quadratic
// residues QR_N. Elements of QR_N are addressed by their index in the sorted
// residue list, so the common domain is {0, ..., |QR_N| - 1}.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qrom/core/bits.hpp"
#include "qrom/core/random.hpp"

namespace qrom::primitives {

inline constexpr unsigned kMaxGmrModulusBits = 24;

/// Moduli here stay below 2^32, so the product fits in 64 bits.
inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return (a % m) * (b % m) % m;
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return r;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Inverse of a mod m (gcd must be 1).
inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, nt = 1;
  std::int64_t r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
  while (nr) {
    const auto q = r / nr;
    std::tie(t, nt) = std::pair{nt, t - q * nt};
    std::tie(r, nr) = std::pair{nr, r - q * nr};
  }
  if (r != 1) throw std::invalid_argument("inv_mod: not invertible");
  return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(m) : t);
}

struct ClawFreePublicKey {
  std::uint64_t modulus = 0;
  std::shared_ptr<const std::vector<std::uint64_t>> residues;  // sorted QR_N

  std::uint64_t domain_size() const noexcept { return residues->size(); }
  std::uint64_t residue(std::uint64_t index) const {
    if (index >= residues->size()) throw std::out_of_range("claw-free: index outside domain");
    return (*residues)[index];
  }
  std::uint64_t index_of(std::uint64_t value) const {
    auto it = std::lower_bound(residues->begin(), residues->end(), value);
    if (it == residues->end() || *it != value)
      throw std::invalid_argument("claw-free: value is not a quadratic residue");
    return static_cast<std::uint64_t>(it - residues->begin());
  }
  std::uint64_t f1(std::uint64_t x) const {
    const auto v = residue(x);
    return index_of(mul_mod(v, v, modulus));
  }
  std::uint64_t f2(std::uint64_t x) const {
    const auto v = residue(x);
    return index_of(mul_mod(4 % modulus, mul_mod(v, v, modulus), modulus));
  }
  std::uint64_t f(int which, std::uint64_t x) const { return which == 1 ? f1(x) : f2(x); }
};

struct ClawFreeSecretKey {
  std::uint64_t p = 0;
  std::uint64_t q = 0;
};

/// A claw is (x1, x2) with f1(x1) = f2(x2).
inline bool verify_claw(const ClawFreePublicKey& pk, std::uint64_t x1, std::uint64_t x2) {
  if (x1 >= pk.domain_size() || x2 >= pk.domain_size()) return false;
  return pk.f1(x1) == pk.f2(x2);
}

class ClawFreePair {
 public:
  static ClawFreePair from_primes(std::uint64_t p, std::uint64_t q) {
    if (p == q || !is_prime(p) || !is_prime(q) || p % 4 != 3 || q % 4 != 3)
      throw std::invalid_argument("claw-free: need distinct primes p = q = 3 mod 4");
    const std::uint64_t n = p * q;
    if (bit_length(n) > kMaxGmrModulusBits)
      throw std::invalid_argument("claw-free: modulus exceeds " + std::to_string(kMaxGmrModulusBits) + " bits");
    std::vector<unsigned char> is_qr(n, 0);
    for (std::uint64_t x = 1; x < n; ++x)
      if (x % p != 0 && x % q != 0) is_qr[mul_mod(x, x, n)] = 1;
    auto res = std::make_shared<std::vector<std::uint64_t>>();
    for (std::uint64_t y = 0; y < n; ++y)
      if (is_qr[y]) res->push_back(y);
    ClawFreePair c;
    c.pk_ = {n, std::move(res)};
    c.sk_ = {p, q};
    return c;
  }

  const ClawFreePublicKey& pk() const noexcept { return pk_; }
  const ClawFreeSecretKey& sk() const noexcept { return sk_; }
  std::uint64_t domain_size() const noexcept { return pk_.domain_size(); }

  std::uint64_t f1(std::uint64_t x) const { return pk_.f1(x); }
  std::uint64_t f2(std::uint64_t x) const { return pk_.f2(x); }
  std::uint64_t f(int which, std::uint64_t x) const { return pk_.f(which, x); }

  /// The unique square root of y inside QR_N.
  std::uint64_t f1_inv(std::uint64_t y) const { return pk_.index_of(principal_sqrt(pk_.residue(y))); }
  /// f2^{-1}(y) = f1^{-1}(y / 4).
  std::uint64_t f2_inv(std::uint64_t y) const {
    const auto n = pk_.modulus;
    const auto v = mul_mod(pk_.residue(y), inv_mod(4 % n, n), n);
    return pk_.index_of(principal_sqrt(v));
  }
  std::uint64_t f_inv(int which, std::uint64_t y) const { return which == 1 ? f1_inv(y) : f2_inv(y); }

 private:
  std::uint64_t principal_sqrt(std::uint64_t v) const {
    const auto [p, q] = sk_;
    // For p = 3 mod 4, v^((p+1)/4) is the square root of v that is itself a residue.
    const auto rp = pow_mod(v % p, (p + 1) / 4, p);
    const auto rq = pow_mod(v % q, (q + 1) / 4, q);
    const auto n = p * q;
    const auto cp = mul_mod(q, inv_mod(q % p, p), n);
    const auto cq = mul_mod(p, inv_mod(p % q, q), n);
    return (mul_mod(rp, cp, n) + mul_mod(rq, cq, n)) % n;
  }

  ClawFreePublicKey pk_;
  ClawFreeSecretKey sk_;
};

/// Random Blum integer with exactly `modulus_bits` bits.
inline ClawFreePair gmr_clawfree_gen(unsigned modulus_bits, Rng& rng) {
  if (modulus_bits > kMaxGmrModulusBits)
    throw std::invalid_argument("gmr_clawfree_gen: modulus_bits exceeds " +
                                std::to_string(kMaxGmrModulusBits));
  if (modulus_bits < 5) throw std::invalid_argument("gmr_clawfree_gen: modulus_bits < 5");
  const unsigned pb = modulus_bits / 2;
  const unsigned qb = modulus_bits - pb + 1;
  std::vector<std::uint64_t> candidates;
  for (std::uint64_t x = 3; x < (std::uint64_t{1} << qb); x += 4)
    if (is_prime(x)) candidates.push_back(x);
  for (int attempt = 0; attempt < 4096; ++attempt) {
    const auto p = candidates[uniform_below(rng, candidates.size())];
    const auto q = candidates[uniform_below(rng, candidates.size())];
    if (p == q || bit_length(p * q) != modulus_bits) continue;
    return ClawFreePair::from_primes(std::min(p, q), std::max(p, q));
  }
  throw std::runtime_error("gmr_clawfree_gen: prime generation failed at " +
                           std::to_string(modulus_bits) + " bits");
}

}  // namespace qrom::primitives
