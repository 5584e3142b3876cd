#pragma once

// History-free reductions for FDH over a PSF, FDH over a claw-free pair
// (Coron-style, parameter p) and Katz-Wang.
//
// O_c is a lazily sampled ClassicalRO with 64-bit inputs and outputs. Query
// number `counter` for input r goes to O_c((counter << 48) | r). A pair
// (a, b) is carved from one answer w:
//   a = (w >> 32) mod D, b = (w & 0xffffffff) mod p, with b = 0 read as p,
// and the word is rejected (counter + 1) unless both halves lie below the
// largest multiple of D, resp. p, that fits in 32 bits. Rejection keeps a
// and b exactly uniform, and the counter keeps every answer a function of r.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrom/core/bits.hpp"
#include "qrom/primitives/classical_ro.hpp"
#include "qrom/primitives/clawfree.hpp"
#include "qrom/primitives/coins.hpp"
#include "qrom/primitives/psf.hpp"
#include "qrom/schemes/oracle.hpp"

namespace qrom::reductions {

using primitives::ClassicalRO;

inline constexpr unsigned kOcInputBits = 64;
inline constexpr unsigned kOcCounterShift = 48;
inline constexpr unsigned kMaxReductionInputBits = kOcCounterShift;

inline ClassicalRO make_oc(std::uint64_t seed) { return ClassicalRO::lazy(kOcInputBits, 64, seed); }

inline std::uint64_t oc_key(std::uint64_t r, std::uint64_t counter) {
  if (r >> kOcCounterShift) throw std::out_of_range("O_c input exceeds 48 bits");
  return (counter << kOcCounterShift) | r;
}

/// Coin words O_c(r | 0), O_c(r | 1), ... as a CoinSource.
inline primitives::CoinSource oc_coins(ClassicalRO& oc, std::uint64_t r) {
  return [&oc, r, counter = std::uint64_t{0}]() mutable { return oc.query(oc_key(r, counter++)); };
}

struct OcPair {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
};

inline OcPair decode_pair(ClassicalRO& oc, std::uint64_t r, std::uint64_t domain, std::uint64_t p) {
  if (domain == 0 || domain > 0xffffffffULL || p == 0 || p > 0xffffffffULL)
    throw std::invalid_argument("decode_pair: domain and p must be in [1, 2^32)");
  const std::uint64_t lim_a = (0x100000000ULL / domain) * domain;
  const std::uint64_t lim_b = (0x100000000ULL / p) * p;
  for (std::uint64_t counter = 0;; ++counter) {
    const auto w = oc.query(oc_key(r, counter));
    const std::uint64_t hi = w >> 32, lo = w & 0xffffffffULL;
    if (hi >= lim_a || lo >= lim_b) continue;
    const auto b = lo % p;
    return {hi % domain, b == 0 ? p : b};
  }
}

struct Solution {
  enum class Kind { claw, collision };
  Kind kind = Kind::claw;
  std::uint64_t x1 = 0;
  std::uint64_t x2 = 0;
};

inline const char* to_string(Solution::Kind k) { return k == Solution::Kind::claw ? "claw" : "collision"; }

/// INSTANCE(pk) = pk and START(pk) = (pk, z); each reduction is constructed
/// by START and holds z. RAND, SIGN and FINISH read only (arguments, z, O_c).
class HistoryFreeReduction {
 public:
  virtual ~HistoryFreeReduction() = default;

  virtual std::string name() const = 0;
  /// Number of values the simulated oracle can take.
  virtual std::uint64_t range_size() const = 0;
  /// RAND^{O_c}(r, z).
  virtual std::uint64_t rand(std::uint64_t r, ClassicalRO& oc) const = 0;
  /// SIGN^{O_c}(m, z); nullopt is an abort.
  virtual std::optional<std::uint64_t> sign(std::uint64_t m, ClassicalRO& oc) const = 0;
  /// FINISH^{O_c}(m, sigma, z); nullopt is an abort.
  virtual std::optional<Solution> finish(std::uint64_t m, std::uint64_t sigma, ClassicalRO& oc) const = 0;
  /// Independent checker of the underlying problem.
  virtual bool verify_solution(const Solution& s) const = 0;
  /// Signature verification against the oracle O(r) = rand(r).
  virtual bool verify_signature(std::uint64_t m, std::uint64_t sigma,
                                const std::function<std::uint64_t(std::uint64_t)>& oracle) const = 0;
  /// Exact distribution of rand(r) over the randomness of O_c.
  virtual std::vector<double> exact_rand_distribution() const = 0;
};

/// RAND(r) = f(Sample(O_c(r))), SIGN(m) = Sample(O_c(m)),
/// FINISH(m, sigma) = (Sample(O_c(m)), sigma). Never aborts.
class FdhPsfReduction final : public HistoryFreeReduction {
 public:
  explicit FdhPsfReduction(primitives::Psf psf) : psf_(std::move(psf)) {}

  std::string name() const override { return "fdh-psf"; }
  std::uint64_t range_size() const override { return psf_.range_size; }
  const primitives::Psf& psf() const noexcept { return psf_; }

  std::uint64_t rand(std::uint64_t r, ClassicalRO& oc) const override { return psf_.f(sampled(r, oc)); }
  std::optional<std::uint64_t> sign(std::uint64_t m, ClassicalRO& oc) const override { return sampled(m, oc); }
  std::optional<Solution> finish(std::uint64_t m, std::uint64_t sigma, ClassicalRO& oc) const override {
    return Solution{Solution::Kind::collision, sampled(m, oc), sigma};
  }
  bool verify_solution(const Solution& s) const override {
    return s.kind == Solution::Kind::collision && psf_.is_collision(s.x1, s.x2);
  }
  bool verify_signature(std::uint64_t m, std::uint64_t sigma,
                        const std::function<std::uint64_t(std::uint64_t)>& oracle) const override {
    return sigma < psf_.domain_size && psf_.f(sigma) == oracle(m);
  }
  std::vector<double> exact_rand_distribution() const override { return primitives::exact_image_distribution(psf_); }

 private:
  std::uint64_t sampled(std::uint64_t r, ClassicalRO& oc) const { return psf_.sample(oc_coins(oc, r)); }
  primitives::Psf psf_;
};

/// (a, b) <- O_c(r); RAND(r) = f2(a) if b = 1 else f1(a); SIGN aborts when
/// b = 1 and otherwise returns a; FINISH returns the candidate claw (sigma, a).
class ClawFreeFdhReduction final : public HistoryFreeReduction {
 public:
  ClawFreeFdhReduction(primitives::ClawFreePair pair, std::uint64_t p) : pair_(std::move(pair)), p_(p) {
    if (p < 2) throw std::invalid_argument("claw-free fdh reduction: p must be >= 2");
  }

  /// The default Coron parameter: max(2, q_sign).
  static std::uint64_t default_p(std::uint64_t q_sign) { return q_sign < 2 ? 2 : q_sign; }

  std::string name() const override { return "clawfree-fdh"; }
  std::uint64_t range_size() const override { return pair_.domain_size(); }
  std::uint64_t p() const noexcept { return p_; }
  const primitives::ClawFreePair& pair() const noexcept { return pair_; }

  OcPair decode(std::uint64_t r, ClassicalRO& oc) const { return decode_pair(oc, r, pair_.domain_size(), p_); }

  std::uint64_t rand(std::uint64_t r, ClassicalRO& oc) const override {
    const auto [a, b] = decode(r, oc);
    return b == 1 ? pair_.f2(a) : pair_.f1(a);
  }
  std::optional<std::uint64_t> sign(std::uint64_t m, ClassicalRO& oc) const override {
    const auto [a, b] = decode(m, oc);
    if (b == 1) return std::nullopt;
    return a;
  }
  std::optional<Solution> finish(std::uint64_t m, std::uint64_t sigma, ClassicalRO& oc) const override {
    return Solution{Solution::Kind::claw, sigma, decode(m, oc).a};
  }
  bool verify_solution(const Solution& s) const override {
    return s.kind == Solution::Kind::claw && primitives::verify_claw(pair_.pk(), s.x1, s.x2);
  }
  bool verify_signature(std::uint64_t m, std::uint64_t sigma,
                        const std::function<std::uint64_t(std::uint64_t)>& oracle) const override {
    return sigma < pair_.domain_size() && pair_.f1(sigma) == oracle(m);
  }
  std::vector<double> exact_rand_distribution() const override {
    // a uniform and f1, f2 permutations: each branch is uniform on the range.
    const auto d = pair_.domain_size();
    std::vector<double> dist(d, 0.0);
    const double pb1 = 1.0 / static_cast<double>(p_);
    for (std::uint64_t a = 0; a < d; ++a) {
      dist[pair_.f2(a)] += pb1 / static_cast<double>(d);
      dist[pair_.f1(a)] += (1.0 - pb1) / static_cast<double>(d);
    }
    return dist;
  }

 private:
  primitives::ClawFreePair pair_;
  std::uint64_t p_;
};

/// (a, b') <- O_c(m) with b' a bit; RAND(b || m) = f1(a) if b = b' else
/// f2(a); SIGN(m) = a; FINISH aborts if sigma = a and else returns (sigma, a).
class KatzWangReduction final : public HistoryFreeReduction {
 public:
  KatzWangReduction(primitives::ClawFreePair pair, unsigned msg_bits) : pair_(std::move(pair)), msg_bits_(msg_bits) {
    if (msg_bits + 1 > kMaxReductionInputBits) throw std::invalid_argument("katz-wang reduction: msg_bits too large");
  }

  std::string name() const override { return "katz-wang"; }
  std::uint64_t range_size() const override { return pair_.domain_size(); }
  unsigned msg_bits() const noexcept { return msg_bits_; }
  const primitives::ClawFreePair& pair() const noexcept { return pair_; }

  OcPair decode(std::uint64_t m, ClassicalRO& oc) const {
    const auto [a, b] = decode_pair(oc, m, pair_.domain_size(), 2);
    return {a, b - 1};
  }

  std::uint64_t rand(std::uint64_t r, ClassicalRO& oc) const override {
    const std::uint64_t b = r >> msg_bits_;
    const std::uint64_t m = r & low_mask(msg_bits_);
    if (b > 1) throw std::out_of_range("katz-wang rand: input is not b || m");
    const auto [a, b_prime] = decode(m, oc);
    return b == b_prime ? pair_.f1(a) : pair_.f2(a);
  }
  std::optional<std::uint64_t> sign(std::uint64_t m, ClassicalRO& oc) const override { return decode(m, oc).a; }
  std::optional<Solution> finish(std::uint64_t m, std::uint64_t sigma, ClassicalRO& oc) const override {
    const auto a = decode(m, oc).a;
    if (sigma == a) return std::nullopt;
    return Solution{Solution::Kind::claw, sigma, a};
  }
  bool verify_solution(const Solution& s) const override {
    return s.kind == Solution::Kind::claw && primitives::verify_claw(pair_.pk(), s.x1, s.x2);
  }
  bool verify_signature(std::uint64_t m, std::uint64_t sigma,
                        const std::function<std::uint64_t(std::uint64_t)>& oracle) const override {
    if (sigma >= pair_.domain_size()) return false;
    const auto img = pair_.f1(sigma);
    return img == oracle(m) || img == oracle((std::uint64_t{1} << msg_bits_) | m);
  }
  std::vector<double> exact_rand_distribution() const override {
    const auto d = pair_.domain_size();
    return std::vector<double>(d, 1.0 / static_cast<double>(d));
  }

 private:
  primitives::ClawFreePair pair_;
  unsigned msg_bits_;
};

}  // namespace qrom::reductions
