#pragma once

// Preimage sampleable functions over index-encoded domains and ranges.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrom/core/random.hpp"
#include "qrom/primitives/clawfree.hpp"
#include "qrom/primitives/coins.hpp"

namespace qrom::primitives {

inline constexpr unsigned kMaxTablePsfDomainBits = 18;

struct Psf {
  std::string name;
  std::uint64_t domain_size = 0;
  std::uint64_t range_size = 0;
  double eps_sample = 0.0;   ///< claimed bound on |f(Sample) - U(R)|
  double min_entropy = 0.0;  ///< E, in bits

  std::function<std::uint64_t(const CoinSource&)> sample;
  std::function<std::uint64_t(std::uint64_t)> f;
  std::function<std::uint64_t(std::uint64_t, const CoinSource&)> f_inv;
  /// Exact output distribution of `sample` over the domain.
  std::function<std::vector<double>()> sample_distribution;
  /// Present when collisions map to claws of an underlying pair.
  std::function<std::optional<std::pair<std::uint64_t, std::uint64_t>>(std::uint64_t, std::uint64_t)>
      collision_to_claw;

  bool is_collision(std::uint64_t x1, std::uint64_t x2) const {
    return x1 != x2 && x1 < domain_size && x2 < domain_size && f(x1) == f(x2);
  }
};

/// Distribution of f(Sample()) over the range, computed exactly.
inline std::vector<double> exact_image_distribution(const Psf& psf) {
  const auto ds = psf.sample_distribution();
  std::vector<double> img(psf.range_size, 0.0);
  for (std::uint64_t x = 0; x < ds.size(); ++x)
    if (ds[x] > 0.0) img[psf.f(x)] += ds[x];
  return img;
}

/// All preimages of y, by exhaustive scan.
inline std::vector<std::uint64_t> preimages(const Psf& psf, std::uint64_t y) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t x = 0; x < psf.domain_size; ++x)
    if (psf.f(x) == y) out.push_back(x);
  return out;
}

/// Domain encoding (x, b) -> 2x + b; b = 0 selects f1 and b = 1 selects f2.
inline Psf psf_from_clawfree(const ClawFreePair& pair) {
  auto cf = std::make_shared<const ClawFreePair>(pair);
  const auto n = cf->domain_size();
  Psf psf;
  psf.name = "clawfree";
  psf.domain_size = 2 * n;
  psf.range_size = n;
  psf.eps_sample = 0.0;
  psf.min_entropy = 1.0;
  psf.sample = [n](const CoinSource& c) { return coin_below(c, 2 * n); };
  psf.f = [cf](std::uint64_t xb) { return (xb & 1) ? cf->f2(xb >> 1) : cf->f1(xb >> 1); };
  psf.f_inv = [cf](std::uint64_t y, const CoinSource& c) {
    const std::uint64_t b = c() & 1;
    return ((b ? cf->f2_inv(y) : cf->f1_inv(y)) << 1) | b;
  };
  psf.sample_distribution = [n] { return std::vector<double>(2 * n, 1.0 / static_cast<double>(2 * n)); };
  psf.collision_to_claw = [cf](std::uint64_t u, std::uint64_t v)
      -> std::optional<std::pair<std::uint64_t, std::uint64_t>> {
    if ((u & 1) == (v & 1)) return std::nullopt;
    if (u & 1) std::swap(u, v);
    return std::pair{u >> 1, v >> 1};  // u uses f1, v uses f2
  };
  return psf;
}

namespace detail {

struct RegularTable {
  unsigned domain_bits;
  unsigned range_bits;
  std::vector<std::uint32_t> f;                     // x -> y
  std::vector<std::vector<std::uint32_t>> pre;      // y -> preimages
};

inline std::shared_ptr<RegularTable> random_regular_table(unsigned d, unsigned r, Rng& rng) {
  if (d > kMaxTablePsfDomainBits)
    throw std::invalid_argument("table_psf_gen: domain_bits exceeds " + std::to_string(kMaxTablePsfDomainBits));
  if (r > d) throw std::invalid_argument("table_psf_gen: range_bits > domain_bits is not regular");
  auto t = std::make_shared<RegularTable>();
  t->domain_bits = d;
  t->range_bits = r;
  std::vector<std::uint32_t> perm(std::size_t{1} << d);
  std::iota(perm.begin(), perm.end(), 0u);
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[uniform_below(rng, i)]);
  t->f.resize(perm.size());
  t->pre.assign(std::size_t{1} << r, {});
  for (std::size_t x = 0; x < perm.size(); ++x) {
    t->f[x] = perm[x] >> (d - r);
    t->pre[t->f[x]].push_back(static_cast<std::uint32_t>(x));
  }
  return t;
}

}  // namespace detail

/// Random regular function {0,1}^D -> {0,1}^R: every image has exactly
/// 2^(D-R) preimages. Sample is uniform, so eps_sample = 0 and E = D - R.
inline Psf table_psf_gen(unsigned domain_bits, unsigned range_bits, Rng& rng) {
  auto t = detail::random_regular_table(domain_bits, range_bits, rng);
  const std::uint64_t dsize = std::uint64_t{1} << domain_bits;
  Psf psf;
  psf.name = "table";
  psf.domain_size = dsize;
  psf.range_size = std::uint64_t{1} << range_bits;
  psf.eps_sample = 0.0;
  psf.min_entropy = static_cast<double>(domain_bits - range_bits);
  psf.sample = [dsize](const CoinSource& c) { return coin_below(c, dsize); };
  psf.f = [t](std::uint64_t x) -> std::uint64_t { return t->f.at(x); };
  psf.f_inv = [t](std::uint64_t y, const CoinSource& c) -> std::uint64_t {
    const auto& p = t->pre.at(y);
    return p[coin_below(c, p.size())];
  };
  psf.sample_distribution = [dsize] { return std::vector<double>(dsize, 1.0 / static_cast<double>(dsize)); };
  return psf;
}

/// Table PSF whose sampler is deliberately biased: with a second 16-bit coin,
/// a fraction k/2^16 of the samples that land on image 0 are moved to a
/// preimage of the last image. The shifted mass is delta = k / (2^R 2^16),
/// so |f(Sample) - U| = 2 delta, which is stored as eps_sample. `target_eps`
/// is rounded down to the nearest achievable value.
inline Psf skewed_table_psf_gen(unsigned domain_bits, unsigned range_bits, double target_eps, Rng& rng) {
  if (range_bits == 0) throw std::invalid_argument("skewed_table_psf_gen: need range_bits >= 1");
  auto t = detail::random_regular_table(domain_bits, range_bits, rng);
  const std::uint64_t dsize = std::uint64_t{1} << domain_bits;
  const std::uint64_t rsize = std::uint64_t{1} << range_bits;
  const double max_eps = 2.0 / static_cast<double>(rsize);
  if (!(target_eps >= 0.0) || target_eps > max_eps)
    throw std::invalid_argument("skewed_table_psf_gen: target_eps outside [0, 2/2^R]");
  const auto k = static_cast<std::uint64_t>(std::floor(target_eps * static_cast<double>(rsize) * 65536.0 / 2.0));
  const std::uint64_t y_lo = 0, y_hi = rsize - 1;

  Psf psf;
  psf.name = "skewed-table";
  psf.domain_size = dsize;
  psf.range_size = rsize;
  psf.eps_sample = 2.0 * static_cast<double>(k) / (static_cast<double>(rsize) * 65536.0);
  psf.min_entropy = 0.0;  // preimages of y_hi are no longer equally likely
  psf.sample = [t, dsize, k, y_lo, y_hi](const CoinSource& c) -> std::uint64_t {
    const auto x = coin_below(c, dsize);
    const auto skew = c() & 0xffff;
    if (t->f[x] != y_lo || skew >= k) return x;
    // Redirect to the preimage of y_hi with the same rank as x among y_lo's.
    const auto& lo = t->pre[y_lo];
    const auto rank = static_cast<std::size_t>(std::find(lo.begin(), lo.end(), x) - lo.begin());
    return t->pre[y_hi][rank];
  };
  psf.f = [t](std::uint64_t x) -> std::uint64_t { return t->f.at(x); };
  psf.f_inv = [t](std::uint64_t y, const CoinSource& c) -> std::uint64_t {
    const auto& p = t->pre.at(y);
    return p[coin_below(c, p.size())];
  };
  psf.sample_distribution = [t, dsize, k, y_lo, y_hi] {
    std::vector<double> d(dsize, 1.0 / static_cast<double>(dsize));
    const double moved = static_cast<double>(k) / 65536.0 / static_cast<double>(dsize);
    for (std::size_t i = 0; i < t->pre[y_lo].size(); ++i) {
      d[t->pre[y_lo][i]] -= moved;
      d[t->pre[y_hi][i]] += moved;
    }
    return d;
  };
  return psf;
}

}  // namespace qrom::primitives
