#include <gtest/gtest.h>

#include <cmath>

#include "qrom/experiments/crypto.hpp"
#include "qrom/experiments/reductions.hpp"
#include "qrom/reductions/cca.hpp"
#include "qrom/reductions/game.hpp"
#include "qrom/reductions/history_free.hpp"

using namespace qrom;
using namespace qrom::reductions;

namespace {

double sigma4(double p, std::size_t n) { return 4 * std::sqrt(p * (1 - p) / n); }

}  // namespace

TEST(DecodePair, ComponentsAreUniform) {
  auto oc = make_oc(1);
  const std::uint64_t domain = 7, p = 5;
  std::vector<int> ha(domain, 0), hb(p + 1, 0);
  const int n = 35000;
  for (int r = 0; r < n; ++r) {
    const auto [a, b] = decode_pair(oc, r, domain, p);
    ASSERT_LT(a, domain);
    ASSERT_GE(b, 1u);
    ASSERT_LE(b, p);
    ++ha[a];
    ++hb[b];
  }
  for (int c : ha) EXPECT_NEAR(c / double(n), 1.0 / 7, sigma4(1.0 / 7, n));
  for (std::uint64_t b = 1; b <= p; ++b) EXPECT_NEAR(hb[b] / double(n), 0.2, sigma4(0.2, n));
  EXPECT_THROW(decode_pair(oc, 0, 0, 2), std::invalid_argument);
}

TEST(Coron, SignAbortsAtRateOneOverP) {
  const auto pair = experiments::experiment_pair(2);
  const ClawFreeFdhReduction red(pair, 8);
  auto oc = make_oc(3);
  int aborts = 0;
  const int n = 20000;
  for (int m = 0; m < n; ++m) {
    const auto s = red.sign(m, oc);
    const auto [a, b] = red.decode(m, oc);
    EXPECT_EQ(!s, b == 1);
    aborts += !s;
  }
  EXPECT_NEAR(aborts / double(n), 0.125, sigma4(0.125, n));
  EXPECT_THROW(ClawFreeFdhReduction(pair, 1), std::invalid_argument);
  EXPECT_EQ(ClawFreeFdhReduction::default_p(1), 2u);
  EXPECT_EQ(ClawFreeFdhReduction::default_p(20), 20u);
}

TEST(Coron, SignaturesAreConsistentWithRand) {
  const auto pair = experiments::experiment_pair(4);
  const ClawFreeFdhReduction red(pair, 4);
  auto oc = make_oc(5);
  HashFn h = [&](std::uint64_t r) { return red.rand(r, oc); };
  for (int m = 0; m < 500; ++m)
    if (const auto s = red.sign(m, oc)) EXPECT_TRUE(red.verify_signature(m, *s, h));
}

TEST(Coron, ExperimentMatchesAbortLaw) {
  const auto rep = experiments::coron_experiment(10, 10, 3000, 6);
  EXPECT_TRUE(rep.pass());
  for (const auto& r : rep.rates) EXPECT_TRUE(r.pass()) << r.quantity << " z=" << r.z();
  EXPECT_EQ(rep.invalid_solutions, 0u);
  EXPECT_GT(rep.audit.checked, 0u);
  EXPECT_TRUE(rep.audit.passed());
}

TEST(KatzWang, FinishAbortsWhenForgeryMatchesSign) {
  const auto pair = experiments::experiment_pair(7);
  const KatzWangReduction red(pair, 16);
  auto oc = make_oc(8);
  for (int m = 0; m < 100; ++m) {
    const auto a = *red.sign(m, oc);
    EXPECT_FALSE(red.finish(m, a, oc));
    // The other branch's preimage is a claw partner of a.
    const auto b_prime = red.decode(m, oc).b;
    const auto other = red.rand(((1 - b_prime) << 16) | m, oc);
    const auto sigma = pair.f1_inv(other);
    const auto sol = red.finish(m, sigma, oc);
    ASSERT_TRUE(sol);
    EXPECT_TRUE(red.verify_solution(*sol));
  }
}

TEST(KatzWang, ExperimentExtractsAtHalfAndClawsVerify) {
  const auto rep = experiments::katz_wang_experiment(10, 1000, 9);
  EXPECT_TRUE(rep.pass()) << rep.rates.front().z();
  EXPECT_GT(rep.emitted_solutions, 0u);
  EXPECT_EQ(rep.invalid_solutions, 0u);
}

TEST(FdhPsf, CollisionRateFollowsMinEntropy) {
  for (const auto& psf : {experiments::clawfree_psf(10), experiments::regular_table_psf(8, 4, 11)}) {
    const auto rep = experiments::fdh_psf_experiment(psf, 10, 1500, 12);
    EXPECT_TRUE(rep.pass()) << psf.name << " z=" << rep.rates.front().z();
  }
}

TEST(Games, ResigningForgerIsNeverAccepted) {
  const auto pair = experiments::experiment_pair(13);
  const ClawFreeFdhReduction red(pair, 50);
  const auto forger = resigning_forger(3);
  for (int g = 0; g < 200; ++g) {
    const auto out = run_signature_game(red, forger, derive_seed(14, g), derive_seed(15, g));
    EXPECT_FALSE(out.valid_forgery);
    EXPECT_FALSE(out.challenger_accepts);
    EXPECT_FALSE(out.solution);
  }
}

TEST(Games, AuditReplaysEveryQuery) {
  const auto pair = experiments::experiment_pair(16);
  const KatzWangReduction red(pair, 32);
  const auto forger = branch_uniform_kw_forger(pair, 5);
  const auto out = run_signature_game(red, forger, 17, 18);
  const auto a = audit_history_freedom(red, out);
  EXPECT_EQ(a.checked, out.rand_log.size() + out.sign_log.size());
  EXPECT_TRUE(a.passed());
}

TEST(Uniformity, ClawFreeAndTablePsfAreExactlyUniform) {
  const FdhPsfReduction cf(experiments::clawfree_psf(19, 10));
  const auto r1 = rand_uniformity_audit(cf, 5000, 20);
  EXPECT_NEAR(r1.exact_eps, 0.0, 1e-12);
  const FdhPsfReduction tab(experiments::regular_table_psf(6, 2, 21));
  const auto r2 = rand_uniformity_audit(tab, 5000, 22);
  EXPECT_NEAR(r2.exact_eps, 0.0, 1e-12);
  EXPECT_NEAR(r2.monte_carlo_eps, 0.0, 0.08);
  ASSERT_FALSE(r2.distinguishers.empty());
  for (const auto& d : r2.distinguishers) EXPECT_NEAR(d.measured_distance, 0.0, 1e-9);
}

TEST(Uniformity, SkewedPsfDistinguishersStayWithinBound) {
  auto rng = make_rng(23);
  const FdhPsfReduction red(primitives::skewed_table_psf_gen(6, 2, 0.05, rng));
  const auto rep = rand_uniformity_audit(red, 20000, 24, 2);
  EXPECT_NEAR(rep.exact_eps, red.psf().eps_sample, 1e-12);
  EXPECT_NEAR(rep.monte_carlo_eps, rep.exact_eps, 0.04);
  ASSERT_EQ(rep.distinguishers.size(), 4u);
  for (const auto& d : rep.distinguishers) EXPECT_TRUE(d.passed()) << d.measured_distance << " > " << d.bound;
}

TEST(Uniformity, CoronRandIsUniform) {
  const auto pair = experiments::experiment_pair(25);
  const ClawFreeFdhReduction red(pair, 3);
  EXPECT_NEAR(qsim::distance_from_uniform(red.exact_rand_distribution()), 0.0, 1e-12);
}

TEST(Cca, CorpusQueryMassesAndExtractionRates) {
  const auto tdp = experiments::cca_tdp(26);
  const auto corpus = cca_adversary_corpus(experiments::kCcaDomainBits, experiments::kCcaKeyBits);
  const auto find = [&](const std::string& name) {
    for (const auto& a : corpus)
      if (a.name == name) return a;
    throw std::logic_error(name);
  };
  const std::size_t n = 4000;
  const auto avoid = cca_inverter_experiment(tdp, experiments::kCcaKeyBits, find("avoids-r"), n, 27);
  EXPECT_NEAR(avoid.mean_eps, 0.0, 1e-12);
  EXPECT_EQ(avoid.extraction.hits, 0u);
  const auto once = cca_inverter_experiment(tdp, experiments::kCcaKeyBits, find("full-mass-once"), n, 28);
  EXPECT_NEAR(once.mean_eps, 1.0, 1e-9);
  EXPECT_NEAR(once.expected_rate, 0.25, 1e-9);
  EXPECT_TRUE(once.within(4.0)) << once.extraction.rate();
  const auto spread = cca_inverter_experiment(tdp, experiments::kCcaKeyBits, find("spread-half"), n, 29);
  EXPECT_NEAR(spread.mean_eps, 0.5, 1e-9);
  EXPECT_NEAR(spread.expected_rate, 0.1, 1e-9);
  EXPECT_TRUE(spread.within(4.0)) << spread.extraction.rate();
}

TEST(Cca, ExtractionTableWithinTolerance) {
  for (const auto& row : experiments::extraction_table(3000, 30))
    EXPECT_TRUE(row.pass()) << row.stats.adversary << " " << row.stats.extraction.rate() << " vs "
                            << row.stats.expected_rate;
}

TEST(Cca, ForwardingReproducesTranscripts) {
  for (const auto& row : experiments::forwarding_table(50, 31)) {
    EXPECT_TRUE(row.pass()) << row.adversary;
    EXPECT_EQ(row.sym_challenges, row.runs);
  }
}

TEST(Cca, ForwardingWithoutDecryptionsMakesNoSymmetricDecryptions) {
  const auto tdp = experiments::cca_tdp(32);
  const auto corpus = cca_adversary_corpus(experiments::kCcaDomainBits, experiments::kCcaKeyBits);
  const schemes::OneTimePad otp(experiments::kCcaKeyBits);
  const auto out = cca_symmetric_forwarding_experiment(tdp, otp, corpus.front(), 33);
  EXPECT_TRUE(out.transcripts_equal);
  EXPECT_EQ(out.sym_decryption_queries, 0u);
  EXPECT_EQ(out.sym_challenge_queries, 1u);
}

TEST(Cca, DecryptingAdversaryUsesTheSymmetricOracle) {
  const auto tdp = experiments::cca_tdp(34);
  const auto corpus = cca_adversary_corpus(experiments::kCcaDomainBits, experiments::kCcaKeyBits);
  const auto& dec = corpus.back();
  ASSERT_EQ(dec.name, "decrypting");
  const schemes::OneTimePad otp(experiments::kCcaKeyBits);
  const auto out = cca_symmetric_forwarding_experiment(tdp, otp, dec, 35);
  EXPECT_TRUE(out.transcripts_equal);
  // Two queries reuse the challenge y; the third does too only when y = 0.
  EXPECT_GE(out.sym_decryption_queries, 2u);
  EXPECT_EQ(out.direct.decryptions.size(), 3u);
}
