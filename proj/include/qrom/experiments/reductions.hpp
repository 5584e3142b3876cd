#pragma once

// Signature-game corpora for the history-free reductions: abort law,
// extraction and conversion rates, and the replay audit over every game.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qrom/core/random.hpp"
#include "qrom/experiments/rates.hpp"
#include "qrom/primitives/clawfree.hpp"
#include "qrom/primitives/psf.hpp"
#include "qrom/reductions/game.hpp"
#include "qrom/reductions/history_free.hpp"

namespace qrom::experiments {

struct ReductionReport {
  std::string scheme;
  std::size_t games = 0;
  std::vector<RateCheck> rates;
  std::size_t emitted_solutions = 0;
  /// Emitted solutions on which the challenger and an independent check
  /// disagree (Katz-Wang: emitted claws that fail the claw verifier).
  std::size_t invalid_solutions = 0;
  std::size_t inconsistent_signatures = 0;  ///< SIGN answers that do not verify under RAND
  reductions::AuditResult audit;
  bool pass() const {
    for (const auto& r : rates)
      if (!r.pass()) return false;
    return audit.passed() && inconsistent_signatures == 0 && invalid_solutions == 0;
  }
};

inline constexpr unsigned kDefaultModulusBits = 16;
inline constexpr unsigned kGameMsgBits = 32;

inline primitives::ClawFreePair experiment_pair(std::uint64_t seed, unsigned modulus_bits = kDefaultModulusBits) {
  auto rng = make_rng(derive_seed(seed, 0xc1a3));
  return primitives::gmr_clawfree_gen(modulus_bits, rng);
}

/// Plays `games` games and folds each into the report; `on_game` adds the
/// scheme-specific tallies.
template <class OnGame>
void play_games(ReductionReport& rep, const reductions::HistoryFreeReduction& red,
                const reductions::PlantedForger& forger, std::size_t games, std::uint64_t seed, OnGame&& on_game) {
  rep.games = games;
  for (std::size_t g = 0; g < games; ++g) {
    const auto out = reductions::run_signature_game(red, forger, derive_seed(seed, 2 * g), derive_seed(seed, 2 * g + 1));
    const auto a = reductions::audit_history_freedom(red, out);
    rep.audit.checked += a.checked;
    rep.audit.mismatches += a.mismatches;
    if (!out.signatures_consistent) ++rep.inconsistent_signatures;
    on_game(out);
  }
}

/// Coron-style reduction with parameter p against a trapdoor forger making
/// q_sign signing queries. No-abort in SIGN follows (1 - 1/p)^q_sign; a claw
/// is extracted when additionally the forged message landed on b = 1.
inline ReductionReport coron_experiment(std::uint64_t p, std::size_t q_sign, std::size_t games, std::uint64_t seed,
                                        unsigned modulus_bits = kDefaultModulusBits) {
  const auto pair = experiment_pair(seed, modulus_bits);
  const reductions::ClawFreeFdhReduction red(pair, p);
  const auto forger = reductions::trapdoor_fdh_forger(pair, q_sign, kGameMsgBits);
  ReductionReport rep;
  rep.scheme = "clawfree-fdh";
  Proportion no_abort, claw;
  play_games(rep, red, forger, games, seed, [&](const reductions::GameOutcome& o) {
    no_abort.add(!o.aborted_in_sign);
    claw.add(o.challenger_accepts);
    if (o.solution) {
      ++rep.emitted_solutions;
      if (o.challenger_accepts != primitives::verify_claw(pair.pk(), o.solution->x1, o.solution->x2))
        ++rep.invalid_solutions;
    }
  });
  const double pd = static_cast<double>(p);
  const double na = std::pow(1.0 - 1.0 / pd, static_cast<double>(q_sign));
  rep.rates.push_back(rate_check("clawfree-fdh", "no_abort_vs_(1-1/p)^q", na, no_abort, 4.0));
  rep.rates.push_back(rate_check("clawfree-fdh", "claw_vs_(1-1/p)^q/p", na / pd, claw, 4.0));
  return rep;
}

/// Katz-Wang reduction against a forger that picks its branch uniformly.
inline ReductionReport katz_wang_experiment(std::size_t q_sign, std::size_t games, std::uint64_t seed,
                                            unsigned modulus_bits = kDefaultModulusBits) {
  const auto pair = experiment_pair(seed, modulus_bits);
  const reductions::KatzWangReduction red(pair, kGameMsgBits);
  const auto forger = reductions::branch_uniform_kw_forger(pair, q_sign, kGameMsgBits);
  ReductionReport rep;
  rep.scheme = "katz-wang";
  Proportion claw;
  play_games(rep, red, forger, games, seed, [&](const reductions::GameOutcome& o) {
    claw.add(o.challenger_accepts);
    if (o.solution) {
      ++rep.emitted_solutions;
      if (!primitives::verify_claw(pair.pk(), o.solution->x1, o.solution->x2)) ++rep.invalid_solutions;
    }
  });
  rep.rates.push_back(rate_check("katz-wang", "claw_vs_1/2", 0.5, claw, 4.0));
  return rep;
}

/// FDH over a PSF with a conditional-preimage forger; the collision rate
/// follows 1 - 2^-E.
inline ReductionReport fdh_psf_experiment(const primitives::Psf& psf, std::size_t q_sign, std::size_t games,
                                          std::uint64_t seed) {
  const reductions::FdhPsfReduction red(psf);
  const auto forger = reductions::psf_conditional_forger(psf, q_sign, kGameMsgBits);
  ReductionReport rep;
  rep.scheme = "fdh-psf/" + psf.name;
  Proportion coll;
  play_games(rep, red, forger, games, seed, [&](const reductions::GameOutcome& o) {
    coll.add(o.challenger_accepts);
    if (o.solution) {
      ++rep.emitted_solutions;
      const auto [x1, x2] = std::pair{o.solution->x1, o.solution->x2};
      if (o.challenger_accepts != (x1 != x2 && psf.f(x1) == psf.f(x2))) ++rep.invalid_solutions;
    }
  });
  rep.rates.push_back(rate_check(rep.scheme, "collision_vs_1-2^-E", 1.0 - std::exp2(-psf.min_entropy), coll, 4.0));
  return rep;
}

/// E = 1 PSF built from the claw-free pair.
inline primitives::Psf clawfree_psf(std::uint64_t seed, unsigned modulus_bits = kDefaultModulusBits) {
  return primitives::psf_from_clawfree(experiment_pair(seed, modulus_bits));
}

/// Regular table PSF with E = domain_bits - range_bits.
inline primitives::Psf regular_table_psf(unsigned domain_bits, unsigned range_bits, std::uint64_t seed) {
  auto rng = make_rng(derive_seed(seed, 0x7ab1e));
  return primitives::table_psf_gen(domain_bits, range_bits, rng);
}

}  // namespace qrom::experiments
