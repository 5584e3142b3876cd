#pragma once

// Signature-game driver for history-free reductions, planted forgers, and
// the history-freedom and RAND-uniformity audits.
//
// Real forgers cannot exist against secure schemes, so the forgers here are
// planted: they hold the trapdoor and sign their forgery message directly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qrom/core/bits.hpp"
#include "qrom/core/random.hpp"
#include "qrom/core/stats.hpp"
#include "qrom/primitives/clawfree.hpp"
#include "qrom/primitives/coins.hpp"
#include "qrom/primitives/psf.hpp"
#include "qrom/qsim/circuit.hpp"
#include "qrom/qsim/distance.hpp"
#include "qrom/reductions/history_free.hpp"

namespace qrom::reductions {

using HashFn = std::function<std::uint64_t(std::uint64_t)>;

struct PlantedForger {
  std::string strategy;
  unsigned msg_bits = 32;
  std::size_t sign_queries = 0;
  /// Forges on a message it already had signed, replaying that signature.
  bool resign = false;
  /// sigma* for the fresh message m, given hash access and own coins.
  std::function<std::uint64_t(std::uint64_t m, const HashFn& hash, Rng& rng)> forge;
};

/// FDH forger holding the claw-free trapdoor: sigma = f1^{-1}(O(m)).
inline PlantedForger trapdoor_fdh_forger(const primitives::ClawFreePair& pair, std::size_t q_sign,
                                         unsigned msg_bits = 32) {
  auto cf = std::make_shared<const primitives::ClawFreePair>(pair);
  return {"trapdoor-fdh", msg_bits, q_sign, false,
          [cf](std::uint64_t m, const HashFn& h, Rng&) { return cf->f1_inv(h(m)); }};
}

/// Katz-Wang forger choosing its branch b uniformly: sigma = f1^{-1}(O(b || m)).
inline PlantedForger branch_uniform_kw_forger(const primitives::ClawFreePair& pair, std::size_t q_sign,
                                              unsigned msg_bits = 32) {
  auto cf = std::make_shared<const primitives::ClawFreePair>(pair);
  return {"branch-uniform-kw", msg_bits, q_sign, false,
          [cf, msg_bits](std::uint64_t m, const HashFn& h, Rng& rng) {
            const std::uint64_t b = random_bit(rng) ? 1 : 0;
            return cf->f1_inv(h((b << msg_bits) | m));
          }};
}

/// PSF forger whose preimage is drawn from the conditional distribution
/// given the image: sigma = f^{-1}(O(m)) with fresh coins.
inline PlantedForger psf_conditional_forger(const primitives::Psf& psf, std::size_t q_sign, unsigned msg_bits = 32) {
  auto sp = std::make_shared<const primitives::Psf>(psf);
  return {"psf-conditional", msg_bits, q_sign, false,
          [sp](std::uint64_t m, const HashFn& h, Rng& rng) { return sp->f_inv(h(m), primitives::coins_from(rng)); }};
}

/// Outputs a signature it was given: never a valid forgery.
inline PlantedForger resigning_forger(std::size_t q_sign, unsigned msg_bits = 32) {
  return {"resigning", msg_bits, std::max<std::size_t>(q_sign, 1), true, nullptr};
}

struct QueryRecord {
  std::uint64_t input = 0;
  std::uint64_t output = 0;
};

struct GameOutcome {
  bool aborted = false;
  bool aborted_in_sign = false;
  bool aborted_in_finish = false;
  bool valid_forgery = false;
  bool signatures_consistent = true;  ///< every SIGN answer verified under RAND
  std::optional<Solution> solution;
  bool challenger_accepts = false;
  std::size_t sign_queries = 0;
  std::size_t rand_queries = 0;
  std::uint64_t oc_seed = 0;
  std::vector<QueryRecord> rand_log;
  std::vector<QueryRecord> sign_log;
};

/// One run of: (1) START, (2) forger's RAND-answered hash queries and SIGN
/// answered signing queries, (3) forgery, (4) FINISH, then the challenger
/// checks the emitted solution with the primitive's own verifier.
inline GameOutcome run_signature_game(const HistoryFreeReduction& red, const PlantedForger& forger,
                                      std::uint64_t oc_seed, std::uint64_t forger_seed) {
  GameOutcome out;
  out.oc_seed = oc_seed;
  auto oc = make_oc(oc_seed);
  auto rng = make_rng(forger_seed);
  HashFn hash = [&](std::uint64_t r) {
    const auto v = red.rand(r, oc);
    out.rand_log.push_back({r, v});
    ++out.rand_queries;
    return v;
  };

  std::unordered_set<std::uint64_t> queried;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> received;
  const auto msg_mask = low_mask(forger.msg_bits);
  while (queried.size() < forger.sign_queries) {
    const auto m = rng() & msg_mask;
    if (!queried.insert(m).second) continue;
    ++out.sign_queries;
    const auto s = red.sign(m, oc);
    if (!s) {
      out.aborted = out.aborted_in_sign = true;
      return out;
    }
    out.sign_log.push_back({m, *s});
    if (!red.verify_signature(m, *s, hash)) out.signatures_consistent = false;
    received.emplace_back(m, *s);
  }

  std::uint64_t m_star = 0, sigma_star = 0;
  if (forger.resign) {
    std::tie(m_star, sigma_star) = received.front();
  } else {
    do m_star = rng() & msg_mask;
    while (queried.contains(m_star));
    sigma_star = forger.forge(m_star, hash, rng);
  }
  out.valid_forgery = !queried.contains(m_star) && red.verify_signature(m_star, sigma_star, hash);
  if (!out.valid_forgery) return out;

  out.solution = red.finish(m_star, sigma_star, oc);
  if (!out.solution) {
    out.aborted = out.aborted_in_finish = true;
    return out;
  }
  out.challenger_accepts = red.verify_solution(*out.solution);
  return out;
}

struct AuditResult {
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  bool passed() const noexcept { return mismatches == 0; }
};

/// Replays every logged RAND and SIGN query in isolation, against a fresh
/// replica of O_c, and compares with the in-game answers bit for bit.
inline AuditResult audit_history_freedom(const HistoryFreeReduction& red, const GameOutcome& g) {
  AuditResult a;
  const auto oc = make_oc(g.oc_seed);
  for (const auto& q : g.rand_log) {
    auto fresh = oc.replica();
    ++a.checked;
    if (red.rand(q.input, fresh) != q.output) ++a.mismatches;
  }
  for (const auto& q : g.sign_log) {
    auto fresh = oc.replica();
    ++a.checked;
    const auto s = red.sign(q.input, fresh);
    if (!s || *s != q.output) ++a.mismatches;
  }
  return a;
}

struct DistinguisherCheck {
  std::size_t queries = 0;
  double measured_distance = 0.0;
  double bound = 0.0;
  bool passed() const noexcept { return measured_distance <= bound + 1e-9; }
};

struct UniformityReport {
  double exact_eps = 0.0;        ///< |D - U| for the exact per-point distribution D
  double monte_carlo_eps = 0.0;  ///< |empirical histogram - U| over the materialized table
  std::size_t table_points = 0;
  std::vector<DistinguisherCheck> distinguishers;
};

/// Fixed distinguisher family: q queries on the uniform superposition with a
/// random layer between queries; the whole register is measured.
inline std::vector<qsim::Script> distinguisher_corpus(unsigned in_bits, unsigned out_bits, std::size_t max_q,
                                                      std::uint64_t seed) {
  std::vector<qsim::Script> out;
  for (std::size_t q = 1; q <= max_q; ++q) {
    auto rng = make_rng(derive_seed(seed, q));
    qsim::Script s(in_bits, out_bits);
    s.h(s.input());
    for (std::size_t t = 0; t < q; ++t) {
      s.query();
      qsim::append_random_layer(s, rng);
    }
    out.push_back(std::move(s));
    // Same shape without the initial Hadamard layer.
    out.push_back(qsim::random_script(in_bits, out_bits, 0, q, rng));
  }
  return out;
}

/// Materializes O(r) = rand(r) on `points` inputs and reports its distance
/// from uniform. When the range is a power of two with at most 2 bits, each
/// distinguisher in the corpus is run exhaustively on i.i.d. D-oracles versus
/// uniform oracles over a 2-bit input, and its output distance is compared
/// with 4 q^2 sqrt(eps).
inline UniformityReport rand_uniformity_audit(const HistoryFreeReduction& red, std::size_t points,
                                              std::uint64_t oc_seed, std::size_t max_q = 2) {
  UniformityReport rep;
  const auto exact = red.exact_rand_distribution();
  rep.exact_eps = qsim::distance_from_uniform(exact);

  auto oc = make_oc(oc_seed);
  std::vector<double> hist(red.range_size(), 0.0);
  for (std::size_t r = 0; r < points; ++r) hist[red.rand(r, oc)] += 1.0;
  for (auto& h : hist) h /= static_cast<double>(points);
  rep.monte_carlo_eps = qsim::distance_from_uniform(hist);
  rep.table_points = points;

  const auto range = red.range_size();
  if ((range & (range - 1)) == 0 && range <= 4 && range >= 2) {
    const auto out_bits = static_cast<unsigned>(bit_length(range - 1));
    const std::vector<double> uniform(range, 1.0 / static_cast<double>(range));
    for (const auto& s : distinguisher_corpus(2, out_bits, max_q, oc_seed)) {
      const auto all = qsim::QubitRange{0, s.num_qubits()};
      const auto pd = qsim::exact_output_distribution(s, exact, all);
      const auto pu = qsim::exact_output_distribution(s, uniform, all);
      const double q = static_cast<double>(s.num_queries());
      rep.distinguishers.push_back({s.num_queries(), qsim::total_variation(pd, pu),
                                    4.0 * q * q * std::sqrt(rep.exact_eps)});
    }
  }
  return rep;
}

}  // namespace qrom::reductions
