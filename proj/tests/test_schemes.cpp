#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "qrom/experiments/crypto.hpp"
#include "qrom/experiments/reductions.hpp"
#include "qrom/primitives/classical_ro.hpp"
#include "qrom/schemes/encryption.hpp"
#include "qrom/schemes/oracle.hpp"
#include "qrom/schemes/signatures.hpp"
#include "qrom/schemes/symmetric.hpp"

using namespace qrom;
using namespace qrom::schemes;
using primitives::ClassicalRO;

TEST(Fdh, SignVerifyAndTamper) {
  const auto s = FdhScheme::keygen(12, 1);
  auto o = ClassicalRO::lazy(16, 12, 2);
  for (std::uint64_t m = 0; m < 200; ++m) {
    const auto sig = s.sign(m, o);
    ASSERT_TRUE(s.verify(m, sig, o));
    EXPECT_FALSE(s.verify(m, sig ^ 1, o));
    EXPECT_FALSE(s.verify(m, 1u << 12, o));
  }
}

TEST(Fdh, ExactlyOneSignatureVerifiesPerMessage) {
  const auto s = FdhScheme::keygen(8, 3);
  auto o = ClassicalRO::lazy(8, 8, 4);
  for (std::uint64_t m = 0; m < 20; ++m) {
    int ok = 0;
    for (std::uint64_t sig = 0; sig < 256; ++sig) ok += s.verify(m, sig, o);
    EXPECT_EQ(ok, 1);
  }
}

TEST(Fdh, OracleOutputOutsideDomainIsAnError) {
  const auto s = FdhScheme::keygen(4, 5);
  FunctionOracle o([](std::uint64_t) { return 16u; });
  EXPECT_THROW(s.sign(0, o), std::invalid_argument);
}

TEST(FdhPsf, SigningIsDeterministic) {
  const auto psf = experiments::clawfree_psf(6);
  auto rng = make_rng(7);
  const FdhPsfScheme s(psf, primitives::QprfKey::random(128, rng));
  auto o = ClassicalRO::lazy(20, 64, 8, psf.range_size);
  for (std::uint64_t m = 0; m < 100; ++m) {
    const auto a = s.sign(m, o);
    EXPECT_EQ(a, s.sign(m, o));
    EXPECT_TRUE(s.verify(m, a, o));
  }
}

TEST(FdhPsf, PlantedCollidingMessagesYieldCollisionsHalfTheTime) {
  // Pairs of messages forced onto the same hash value: with E = 1 the two
  // signatures are a PSF collision with probability 1/2.
  const auto psf = experiments::clawfree_psf(9);
  auto rng = make_rng(10);
  const FdhPsfScheme s(psf, primitives::QprfKey::random(128, rng));
  FunctionOracle o([&](std::uint64_t m) { return (m >> 1) % psf.range_size; });
  int coll = 0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t m1 = 2 * i, m2 = 2 * i + 1;
    const auto a = s.sign(m1, o), b = s.sign(m2, o);
    ASSERT_TRUE(s.verify(m1, a, o) && s.verify(m2, b, o));
    ASSERT_EQ(psf.f(a), psf.f(b));
    coll += a != b;
  }
  EXPECT_NEAR(coll / double(n), 0.5, 4 * std::sqrt(0.25 / n));
}

TEST(ClawFreeFdh, SignaturesDoNotInvolveF2) {
  const auto pair = experiments::experiment_pair(11);
  const ClawFreeFdhScheme s(pair);
  auto o = ClassicalRO::lazy(16, 64, 12, pair.domain_size());
  for (std::uint64_t m = 0; m < 200; ++m) {
    const auto sig = s.sign(m, o);
    ASSERT_TRUE(s.verify(m, sig, o));
    EXPECT_EQ(pair.f1(sig), o(m));
  }
  // A pair sharing f1 but with a different f2 accepts the same signatures.
  const auto pk = pair.pk();
  auto o2 = o.replica();
  for (std::uint64_t m = 0; m < 50; ++m) EXPECT_TRUE(ClawFreeFdhScheme::verify(pk, m, s.sign(m, o2), o2));
}

TEST(KatzWang, BranchIsFairAndBothBranchesVerify) {
  const auto pair = experiments::experiment_pair(13);
  const KatzWangScheme s(pair, 16);
  auto o = ClassicalRO::lazy(17, 64, 14, pair.domain_size());
  auto rng = make_rng(15);
  int ones = 0;
  const int n = 5000;
  for (int i = 0; i < n; ++i) {
    const auto m = static_cast<std::uint64_t>(i % 65536);
    const auto sb = s.sign_with_branch(m, o, rng);
    ones += sb.branch == 1;
    ASSERT_TRUE(s.verify(m, sb.sigma, o));
  }
  EXPECT_NEAR(ones / double(n), 0.5, 0.02);
  for (std::uint64_t m = 0; m < 100; ++m) {
    const auto s0 = s.sign_branch(m, 0, o), s1 = s.sign_branch(m, 1, o);
    EXPECT_TRUE(s.verify(m, s0, o));
    EXPECT_TRUE(s.verify(m, s1, o));
  }
  EXPECT_THROW(s.sign(1u << 16, o, rng), std::out_of_range);
}

TEST(Br, ZeroMessageAndFreshCiphertexts) {
  auto rng = make_rng(16);
  const BrScheme br(primitives::table_tdp_gen(10, rng), 16);
  auto o = ClassicalRO::lazy(10, 16, 17);
  const auto ct = br.encrypt(0, o, rng);
  EXPECT_EQ(br.decrypt(ct, o), 0u);
  std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
  for (int i = 0; i < 20; ++i) {
    const auto c = br.encrypt(12345, o, rng);
    EXPECT_EQ(br.decrypt(c, o), 12345u);
    seen.insert({c.y, c.c.body});
  }
  EXPECT_GT(seen.size(), 15u);
}

TEST(Hybrid, AuthenticatedXorRoundTripAndTamper) {
  auto rng = make_rng(18);
  const HybridScheme hy(primitives::table_tdp_gen(10, rng), AuthenticatedXor(16));
  auto o = ClassicalRO::lazy(10, 64, 19);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t m = rng() & 0xffff;
    const auto ct = hy.encrypt(m, o, rng);
    ASSERT_EQ(hy.decrypt(ct, o), m);
    auto t = ct;
    t.c.tag ^= 1;
    EXPECT_FALSE(hy.decrypt(t, o));
    t = ct;
    t.c.nonce ^= 1;
    EXPECT_FALSE(hy.decrypt(t, o));
  }
}

TEST(Hybrid, OneTimePadInstanceEqualsBr) {
  const auto row = experiments::otp_hybrid_equals_br(500, 20);
  EXPECT_TRUE(row.pass()) << row.identical << "/" << row.trials;
}

TEST(OneTimePad, Properties) {
  const OneTimePad p(4);
  auto rng = make_rng(21);
  for (std::uint64_t k = 0; k < 16; ++k)
    for (std::uint64_t m = 0; m < 16; ++m) EXPECT_EQ(p.dec(k, p.enc(k, m, rng)), m);
  EXPECT_EQ(p.enc(0, 9, rng).body, 9u);
  // Uniform key: every ciphertext appears exactly once for each message.
  for (std::uint64_t m = 0; m < 16; ++m) {
    std::vector<int> hist(16, 0);
    for (std::uint64_t k = 0; k < 16; ++k) ++hist[p.enc(k, m, rng).body];
    for (int c : hist) EXPECT_EQ(c, 1);
  }
  EXPECT_THROW(p.enc(16, 0, rng), std::out_of_range);
}

TEST(Correctness, EveryCorpusRowPasses) {
  for (const auto& row : experiments::scheme_correctness(300, 22))
    EXPECT_TRUE(row.pass()) << row.scheme << " " << row.successes << "/" << row.trials
                            << " agree=" << row.backends_agree;
}

TEST(Correctness, SerializedLayoutWidths) {
  auto rng = make_rng(23);
  const HybridScheme hy(primitives::table_tdp_gen(10, rng), AuthenticatedXor(16));
  auto o = ClassicalRO::lazy(10, 64, 24);
  const auto bytes = to_bytes(hy.encrypt(7, o, rng), hy.layout());
  EXPECT_EQ(bytes.size(), 2u + 2u + 2u + 4u);
}
