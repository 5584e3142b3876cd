#pragma once

// Scheme correctness corpora, oracle-backend equivalence, the one-time-pad
// special case of the hybrid scheme, and the CCA inverter / forwarding runs.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qrom/core/random.hpp"
#include "qrom/experiments/rates.hpp"
#include "qrom/experiments/reductions.hpp"
#include "qrom/primitives/classical_ro.hpp"
#include "qrom/primitives/psf.hpp"
#include "qrom/primitives/qprf.hpp"
#include "qrom/primitives/tdp.hpp"
#include "qrom/reductions/cca.hpp"
#include "qrom/schemes/encryption.hpp"
#include "qrom/schemes/signatures.hpp"
#include "qrom/schemes/symmetric.hpp"

namespace qrom::experiments {

using primitives::ClassicalRO;

struct CorrectnessRow {
  std::string scheme;
  std::size_t trials = 0;
  std::size_t successes = 0;
  /// Outputs against the lazy oracle equal outputs against its materialized
  /// table for every message.
  bool backends_agree = true;
  bool pass() const { return trials > 0 && successes == trials && backends_agree; }
};

/// Message width used by the correctness corpora; small enough to
/// materialize every oracle as a table.
inline constexpr unsigned kCorpusMsgBits = 10;

/// Runs `body(lazy, sealed, m)` for each of `n` messages and folds the
/// returned (ok, same) pair into a row.
template <class Body>
CorrectnessRow correctness_row(std::string name, const ClassicalRO& lazy, std::size_t n, std::uint64_t seed,
                               Body&& body) {
  CorrectnessRow row{std::move(name), 0, 0, true};
  auto oracle = lazy.replica();
  auto sealed = ClassicalRO::sealed(lazy.as_table());
  auto rng = make_rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const auto m = rng() & low_mask(kCorpusMsgBits);
    const auto [ok, same] = body(oracle, sealed, m);
    ++row.trials;
    row.successes += ok;
    row.backends_agree = row.backends_agree && same;
  }
  return row;
}

inline std::vector<CorrectnessRow> scheme_correctness(std::size_t n, std::uint64_t seed) {
  std::vector<CorrectnessRow> rows;
  auto key_rng = make_rng(derive_seed(seed, 0));

  {
    const schemes::FdhScheme fdh(primitives::table_tdp_gen(12, key_rng));
    const auto o = ClassicalRO::lazy(kCorpusMsgBits, 12, derive_seed(seed, 1));
    rows.push_back(correctness_row("fdh", o, n, derive_seed(seed, 2), [&](auto& lazy, auto& sealed, std::uint64_t m) {
      const auto s = fdh.sign(m, lazy);
      return std::pair{fdh.verify(m, s, lazy), s == fdh.sign(m, sealed)};
    }));
  }
  {
    const auto psf = clawfree_psf(derive_seed(seed, 3));
    const schemes::FdhPsfScheme sch(psf, primitives::QprfKey::random(128, key_rng));
    const auto o = ClassicalRO::lazy(kCorpusMsgBits, 64, derive_seed(seed, 4), psf.range_size);
    rows.push_back(
        correctness_row("fdh-psf", o, n, derive_seed(seed, 5), [&](auto& lazy, auto& sealed, std::uint64_t m) {
          const auto s = sch.sign(m, lazy);
          return std::pair{sch.verify(m, s, lazy) && s == sch.sign(m, lazy), s == sch.sign(m, sealed)};
        }));
  }
  const auto pair = experiment_pair(derive_seed(seed, 6));
  {
    const schemes::ClawFreeFdhScheme sch(pair);
    const auto o = ClassicalRO::lazy(kCorpusMsgBits, 64, derive_seed(seed, 7), pair.domain_size());
    rows.push_back(
        correctness_row("clawfree-fdh", o, n, derive_seed(seed, 8), [&](auto& lazy, auto& sealed, std::uint64_t m) {
          const auto s = sch.sign(m, lazy);
          return std::pair{sch.verify(m, s, lazy), s == sch.sign(m, sealed)};
        }));
  }
  {
    const schemes::KatzWangScheme sch(pair, kCorpusMsgBits - 1);
    const auto o = ClassicalRO::lazy(kCorpusMsgBits, 64, derive_seed(seed, 9), pair.domain_size());
    auto brng = make_rng(derive_seed(seed, 10));
    rows.push_back(
        correctness_row("katz-wang", o, n, derive_seed(seed, 11), [&](auto& lazy, auto& sealed, std::uint64_t m) {
          m &= low_mask(kCorpusMsgBits - 1);
          auto r1 = brng;
          auto r2 = brng;
          const auto s = sch.sign(m, lazy, r1);
          const auto s2 = sch.sign(m, sealed, r2);
          brng = r1;
          const bool both = sch.verify(m, sch.sign_branch(m, 0, lazy), lazy) &&
                            sch.verify(m, sch.sign_branch(m, 1, lazy), lazy);
          return std::pair{sch.verify(m, s, lazy) && both, s == s2};
        }));
  }
  const auto tdp = primitives::table_tdp_gen(kCorpusMsgBits, key_rng);
  {
    const schemes::BrScheme br(tdp, 16);
    const auto o = ClassicalRO::lazy(kCorpusMsgBits, 16, derive_seed(seed, 12));
    auto crng = make_rng(derive_seed(seed, 13));
    rows.push_back(correctness_row("br", o, n, derive_seed(seed, 14), [&](auto& lazy, auto& sealed, std::uint64_t m) {
      auto c1 = crng;
      auto c2 = crng;
      const auto ct = br.encrypt(m, lazy, c1);
      const auto ct2 = br.encrypt(m, sealed, c2);
      crng = c1;
      return std::pair{br.decrypt(ct, lazy) == m, ct == ct2};
    }));
  }
  {
    const schemes::HybridScheme hy(tdp, schemes::AuthenticatedXor(16));
    const auto o = ClassicalRO::lazy(kCorpusMsgBits, 64, derive_seed(seed, 15));
    auto crng = make_rng(derive_seed(seed, 16));
    rows.push_back(
        correctness_row("hybrid-authxor", o, n, derive_seed(seed, 17), [&](auto& lazy, auto& sealed, std::uint64_t m) {
          auto c1 = crng;
          auto c2 = crng;
          const auto ct = hy.encrypt(m, lazy, c1);
          const auto ct2 = hy.encrypt(m, sealed, c2);
          crng = c1;
          auto tampered = ct;
          tampered.c.body ^= 1;
          return std::pair{hy.decrypt(ct, lazy) == m && !hy.decrypt(tampered, lazy), ct == ct2};
        }));
  }
  return rows;
}

struct EquivalenceRow {
  std::size_t trials = 0;
  std::size_t identical = 0;
  bool pass() const { return trials > 0 && identical == trials; }
};

/// Hybrid with the one-time pad versus BR under equal coins: serialized
/// ciphertexts compared byte for byte.
inline EquivalenceRow otp_hybrid_equals_br(std::size_t n, std::uint64_t seed, unsigned msg_bits = 16) {
  auto key_rng = make_rng(derive_seed(seed, 0));
  const auto tdp = primitives::table_tdp_gen(kCorpusMsgBits, key_rng);
  const schemes::BrScheme br(tdp, msg_bits);
  const schemes::HybridScheme hy(tdp, schemes::OneTimePad(msg_bits));
  auto o1 = ClassicalRO::lazy(kCorpusMsgBits, msg_bits, derive_seed(seed, 1));
  auto o2 = o1.replica();
  auto mrng = make_rng(derive_seed(seed, 2));
  EquivalenceRow row;
  for (std::size_t i = 0; i < n; ++i) {
    const auto m = mrng() & low_mask(msg_bits);
    auto c1 = make_rng(derive_seed(seed, 1000 + i));
    auto c2 = make_rng(derive_seed(seed, 1000 + i));
    const auto a = schemes::to_bytes(br.encrypt(m, o1, c1), br.layout());
    const auto b = schemes::to_bytes(hy.encrypt(m, o2, c2), hy.layout());
    ++row.trials;
    row.identical += a == b;
  }
  return row;
}

inline constexpr unsigned kCcaDomainBits = 3;
inline constexpr unsigned kCcaKeyBits = 2;

inline primitives::TrapdoorPermutation cca_tdp(std::uint64_t seed) {
  auto rng = make_rng(derive_seed(seed, 0xcca));
  return primitives::table_tdp_gen(kCcaDomainBits, rng);
}

struct ExtractionRow {
  reductions::InverterStats stats;
  double sigmas = 4.0;
  bool pass() const { return stats.within(sigmas); }
};

/// B_F's extraction rate against eps/q for every adversary in the corpus.
inline std::vector<ExtractionRow> extraction_table(std::size_t trials, std::uint64_t seed) {
  const auto tdp = cca_tdp(seed);
  std::vector<ExtractionRow> rows;
  std::size_t i = 0;
  for (const auto& adv : reductions::cca_adversary_corpus(kCcaDomainBits, kCcaKeyBits))
    rows.push_back({reductions::cca_inverter_experiment(tdp, kCcaKeyBits, adv, trials, derive_seed(seed, ++i)), 4.0});
  return rows;
}

struct ForwardingRow {
  std::string adversary;
  std::size_t runs = 0;
  std::size_t equal = 0;
  std::size_t sym_challenges = 0;
  std::size_t sym_decryptions = 0;
  bool pass() const { return runs > 0 && equal == runs; }
};

/// B_ES transcripts against the direct Game 1 transcripts, one-time pad.
inline std::vector<ForwardingRow> forwarding_table(std::size_t runs, std::uint64_t seed) {
  const auto tdp = cca_tdp(seed);
  const schemes::OneTimePad otp(kCcaKeyBits);
  std::vector<ForwardingRow> rows;
  for (const auto& adv : reductions::cca_adversary_corpus(kCcaDomainBits, kCcaKeyBits)) {
    ForwardingRow row{adv.name, 0, 0, 0, 0};
    for (std::size_t t = 0; t < runs; ++t) {
      const auto out = reductions::cca_symmetric_forwarding_experiment(tdp, otp, adv, derive_seed(seed, t));
      ++row.runs;
      row.equal += out.transcripts_equal;
      row.sym_challenges += out.sym_challenge_queries;
      row.sym_decryptions += out.sym_decryption_queries;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qrom::experiments
