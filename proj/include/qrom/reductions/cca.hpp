#pragma once

// Experiments from the CCA proof of the hybrid scheme, at desk scale.
//
// Game 1: the challenger picks r, sets y = f(r), picks an independent
// symmetric key k and answers
//   quantum oracle queries with O_quant(x) = O_q(f(x)),
//   decryption queries (y', c') with D_S(k, c') if y' = y and with
//   D_S(O_q(y'), c') otherwise,
//   the challenge with (y, E_S(k, m_b)).
// Adversaries are scripted circuits built with knowledge of r ("planted"),
// so their query mass on r is controlled; their scripts do not depend on
// decryption answers.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrom/core/bits.hpp"
#include "qrom/core/random.hpp"
#include "qrom/core/stats.hpp"
#include "qrom/primitives/classical_ro.hpp"
#include "qrom/primitives/tdp.hpp"
#include "qrom/qsim/circuit.hpp"
#include "qrom/qsim/query_trace.hpp"
#include "qrom/schemes/symmetric.hpp"

namespace qrom::reductions {

struct DecryptionQuery {
  bool same_y = true;            ///< y' = challenge y (Case 1) or y' = other_y (Case 2)
  std::uint64_t other_y = 0;
  std::uint64_t body_xor = 1;    ///< c' = challenge body xor this
};

struct CcaAdversary {
  std::string name;
  std::size_t q = 0;  ///< declared bound on oracle queries
  /// Script for planted challenge randomness r. Input register holds
  /// domain_bits, output register key_bits.
  std::function<qsim::Script(std::uint64_t r)> script;
  std::vector<DecryptionQuery> decryptions;
  std::uint64_t m0 = 0;
  std::uint64_t m1 = 1;
};

/// The scripted-adversary corpus. Query masses on r: 0, exactly 1 in one of
/// four queries, 0.1 in each of five queries, uniform 2^-n per query, and a
/// random planted circuit.
inline std::vector<CcaAdversary> cca_adversary_corpus(unsigned domain_bits, unsigned key_bits) {
  if (domain_bits < 2) throw std::invalid_argument("cca corpus: domain_bits must be >= 2");
  std::vector<CcaAdversary> c;
  const qsim::QubitRange in{0, domain_bits};

  c.push_back({"avoids-r", 3, [=](std::uint64_t r) {
                 qsim::Script s(domain_bits, key_bits);
                 s.xor_const(in, r ^ 1);
                 for (int i = 0; i < 3; ++i) s.query();
                 return s;
               }, {}, 0, 1});

  c.push_back({"full-mass-once", 4, [=](std::uint64_t r) {
                 qsim::Script s(domain_bits, key_bits);
                 s.xor_const(in, r ^ 1).query().query();
                 s.xor_const(in, 1).query().xor_const(in, 1).query();
                 return s;
               }, {}, 0, 1});

  c.push_back({"spread-half", 5, [=](std::uint64_t r) {
                 qsim::Script s(domain_bits, key_bits);
                 s.xor_const(in, r ^ 1).ry(0, 2.0 * std::asin(std::sqrt(0.1)));
                 for (int i = 0; i < 5; ++i) s.query();
                 return s;
               }, {}, 0, 1});

  c.push_back({"hadamard", 2, [=](std::uint64_t) {
                 qsim::Script s(domain_bits, key_bits);
                 s.h(in).query().query();
                 return s;
               }, {}, 0, 1});

  c.push_back({"random-planted", 3, [=](std::uint64_t r) {
                 auto rng = make_rng(0x9a7c0de5ULL);
                 qsim::Script s(domain_bits, key_bits);
                 s.xor_const(in, r).ry(0, 0.9).ry(1, 0.6);
                 for (int i = 0; i < 3; ++i) {
                   s.query();
                   qsim::append_random_layer(s, rng);
                 }
                 return s;
               }, {}, 0, 1});

  c.push_back({"decrypting", 2, [=](std::uint64_t r) {
                 qsim::Script s(domain_bits, key_bits);
                 s.xor_const(in, r).h(1).query().query();
                 return s;
               },
               {{true, 0, 1}, {false, 0, 3}, {true, 0, 2}}, 0, 1});
  return c;
}

/// O_quant(x) = O_q(f(x)) as a table over the tdp domain.
inline qsim::OracleTable quant_oracle(const primitives::TrapdoorPermutation& tdp,
                                      const primitives::ClassicalRO& o_q) {
  const auto oq = o_q.as_table();
  return qsim::OracleTable::from_function(tdp.domain_bits(), oq.out_bits(),
                                          [&](std::uint64_t x) { return oq.query(tdp.f(x)); });
}

struct InverterStats {
  std::string adversary;
  std::size_t q = 0;
  std::size_t trials = 0;
  double mean_eps = 0.0;         ///< mean trace-measured total query probability of r
  double expected_rate = 0.0;    ///< mean of eps / q
  Proportion extraction;         ///< B_F's success
  bool within(double k_sigma) const {
    return within_sigmas(extraction.rate(), expected_rate, extraction.trials, k_sigma);
  }
};

/// Runs Game 1 once per trial to measure eps = sum_t q_r from the trace, and
/// runs B_F on the same instance: pick i uniform in [0, q), run the adversary
/// up to its i-th query, measure the input register and succeed iff the
/// outcome is r.
inline InverterStats cca_inverter_experiment(const primitives::TrapdoorPermutation& tdp, unsigned key_bits,
                                             const CcaAdversary& adv, std::size_t trials, std::uint64_t seed) {
  InverterStats st;
  st.adversary = adv.name;
  st.q = adv.q;
  st.trials = trials;
  MeanAccumulator eps;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto ts = derive_seed(seed, t);
    auto r_rng = make_rng(derive_seed(ts, 1));
    const auto r = uniform_below(r_rng, tdp.domain_size());
    const auto o_q = primitives::ClassicalRO::lazy(tdp.domain_bits(), key_bits, derive_seed(ts, 3));
    const auto oracle = quant_oracle(tdp, o_q);
    const auto script = adv.script(r);
    if (script.num_queries() > adv.q)
      throw std::runtime_error("cca adversary '" + adv.name + "' exceeds its query bound");

    qsim::QueryTrace trace;
    script.run(oracle, &trace);
    const double e = trace.total_mass(r);
    eps.add(e);

    auto bf_rng = make_rng(derive_seed(ts, 7));
    const auto i = uniform_below(bf_rng, adv.q);
    bool hit = false;
    if (i < script.num_queries()) {
      auto s = script.run([&](std::size_t) -> const qsim::OracleTable& { return oracle; }, nullptr, i);
      hit = qsim::partial_measure(s, script.input(), bf_rng) == r;
    }
    st.extraction.add(hit);
  }
  st.mean_eps = eps.mean();
  st.expected_rate = st.mean_eps / static_cast<double>(adv.q);
  return st;
}

/// Symmetric-scheme CCA challenger: holds k and b, answers one challenge and
/// decryption queries other than the challenge ciphertext.
template <schemes::SymmetricScheme Sym>
class SymmetricChallenger {
 public:
  SymmetricChallenger(const Sym& sym, std::uint64_t key, std::uint64_t bit, std::uint64_t coins_seed)
      : sym_(sym), key_(key), bit_(bit), coins_(make_rng(coins_seed)) {}

  schemes::SymCiphertext challenge(std::uint64_t m0, std::uint64_t m1) {
    ++challenge_queries_;
    challenge_ = sym_.enc(key_, bit_ ? m1 : m0, coins_);
    return *challenge_;
  }
  std::optional<std::uint64_t> decrypt(const schemes::SymCiphertext& c) {
    if (challenge_ && c == *challenge_) throw std::logic_error("decryption of the challenge ciphertext");
    ++decryption_queries_;
    return sym_.dec(key_, c);
  }
  std::size_t decryption_queries() const noexcept { return decryption_queries_; }
  std::size_t challenge_queries() const noexcept { return challenge_queries_; }

 private:
  const Sym& sym_;
  std::uint64_t key_;
  std::uint64_t bit_;
  Rng coins_;
  std::optional<schemes::SymCiphertext> challenge_;
  std::size_t decryption_queries_ = 0;
  std::size_t challenge_queries_ = 0;
};

/// Everything the adversary sees, in order.
struct CcaTranscript {
  std::uint64_t y = 0;
  schemes::SymCiphertext challenge;
  std::vector<std::optional<std::uint64_t>> decryptions;
  std::uint64_t final_measurement = 0;
  friend bool operator==(const CcaTranscript&, const CcaTranscript&) = default;
};

struct ForwardingOutcome {
  CcaTranscript direct;
  CcaTranscript forwarded;
  bool transcripts_equal = false;
  std::size_t sym_decryption_queries = 0;
  std::size_t sym_challenge_queries = 0;
};

namespace detail {

/// Seeds: 1 -> r, 2 -> k, 3 -> O_q, 4 -> b, 5 -> E_S coins, 6 -> measurement.
template <schemes::SymmetricScheme Sym, class Challenge, class Case1>
CcaTranscript play_game1(const primitives::TrapdoorPermutation& tdp, const Sym& sym, const CcaAdversary& adv,
                         std::uint64_t seed, Challenge&& challenge, Case1&& case1) {
  CcaTranscript tr;
  auto r_rng = make_rng(derive_seed(seed, 1));
  const auto r = uniform_below(r_rng, tdp.domain_size());
  tr.y = tdp.f(r);
  const auto o_q = primitives::ClassicalRO::lazy(tdp.domain_bits(), sym.key_bits(), derive_seed(seed, 3));
  tr.challenge = challenge(adv.m0, adv.m1);
  auto o_q_log = o_q.replica();
  for (const auto& d : adv.decryptions) {
    auto c = tr.challenge;
    c.body ^= d.body_xor;
    const auto y2 = d.same_y ? tr.y : d.other_y;
    if (y2 == tr.y && c == tr.challenge) {
      tr.decryptions.push_back(std::nullopt);  // the challenge itself is refused
    } else if (y2 == tr.y) {
      tr.decryptions.push_back(case1(c));
    } else {
      tr.decryptions.push_back(sym.dec(o_q_log.query(y2), c));
    }
  }
  const auto script = adv.script(r);
  if (script.num_queries() > adv.q)
    throw std::runtime_error("cca adversary '" + adv.name + "' exceeds its query bound");
  auto state = script.run(quant_oracle(tdp, o_q));
  auto m_rng = make_rng(derive_seed(seed, 6));
  tr.final_measurement = qsim::partial_measure(state, {0, script.num_qubits()}, m_rng);
  return tr;
}

}  // namespace detail

/// Runs Game 1 directly and through B_ES, which forwards the challenge and
/// Case-1 decryptions to a symmetric challenger, and compares transcripts.
template <schemes::SymmetricScheme Sym>
ForwardingOutcome cca_symmetric_forwarding_experiment(const primitives::TrapdoorPermutation& tdp, const Sym& sym,
                                                      const CcaAdversary& adv, std::uint64_t seed) {
  ForwardingOutcome out;
  auto k_rng = make_rng(derive_seed(seed, 2));
  const auto k = k_rng() & low_mask(sym.key_bits());
  auto b_rng = make_rng(derive_seed(seed, 4));
  const std::uint64_t b = random_bit(b_rng) ? 1 : 0;

  {
    auto coins = make_rng(derive_seed(seed, 5));
    out.direct = detail::play_game1(
        tdp, sym, adv, seed, [&](std::uint64_t m0, std::uint64_t m1) { return sym.enc(k, b ? m1 : m0, coins); },
        [&](const schemes::SymCiphertext& c) { return sym.dec(k, c); });
  }
  {
    SymmetricChallenger<Sym> ch(sym, k, b, derive_seed(seed, 5));
    out.forwarded = detail::play_game1(
        tdp, sym, adv, seed, [&](std::uint64_t m0, std::uint64_t m1) { return ch.challenge(m0, m1); },
        [&](const schemes::SymCiphertext& c) { return ch.decrypt(c); });
    out.sym_decryption_queries = ch.decryption_queries();
    out.sym_challenge_queries = ch.challenge_queries();
  }
  out.transcripts_equal = out.direct == out.forwarded;
  return out;
}

}  // namespace qrom::reductions
