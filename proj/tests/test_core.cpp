#include <gtest/gtest.h>

#include <set>

#include "qrom/core/bits.hpp"
#include "qrom/core/random.hpp"
#include "qrom/core/stats.hpp"

using namespace qrom;

TEST(Random, DeriveSeedSeparatesIndices) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(42, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(derive_seed(42, 7), derive_seed(42, 7));
  EXPECT_NE(derive_seed(42, 7), derive_seed(43, 7));
}

TEST(Random, UniformBelowStaysInRangeAndCoversIt) {
  auto rng = make_rng(1);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 7000; ++i) ++hist[uniform_below(rng, 7)];
  for (int h : hist) EXPECT_NEAR(h, 1000, 4 * std::sqrt(1000 * 6.0 / 7));
}

TEST(Random, UnitIntervalIsHalfOpen) {
  auto rng = make_rng(2);
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform_unit(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Bits, MasksAndLengths) {
  EXPECT_EQ(low_mask(0), 0u);
  EXPECT_EQ(low_mask(3), 7u);
  EXPECT_EQ(low_mask(64), ~std::uint64_t{0});
  EXPECT_EQ(bit_length(0), 0u);
  EXPECT_EQ(bit_length(1), 1u);
  EXPECT_EQ(bit_length(255), 8u);
  EXPECT_EQ(bit_length(256), 9u);
}

TEST(Bits, LeadingBitsTakesTheHighEnd) {
  EXPECT_EQ(leading_bits(0b1011'0000, 8, 4), 0b1011u);
  EXPECT_EQ(leading_bits(0xabcd, 16, 16), 0xabcdu);
  EXPECT_EQ(to_bitstring(5, 4), "0101");
  EXPECT_THROW(require_width(8, 3, "x"), std::out_of_range);
  EXPECT_NO_THROW(require_width(7, 3, "x"));
}

TEST(Stats, ProportionAndSigma) {
  Proportion p;
  for (int i = 0; i < 100; ++i) p.add(i % 4 == 0);
  EXPECT_DOUBLE_EQ(p.rate(), 0.25);
  EXPECT_NEAR(binomial_sigma(0.25, 100), std::sqrt(0.25 * 0.75 / 100), 1e-15);
  EXPECT_TRUE(within_sigmas(0.25, 0.25, 100, 1));
  EXPECT_FALSE(within_sigmas(0.5, 0.25, 100, 4));
  EXPECT_TRUE(within_sigmas(0.0, 0.0, 100, 3));
}

TEST(Stats, MeanAccumulator) {
  MeanAccumulator m;
  for (double x : {1.0, 2.0, 3.0, 4.0}) m.add(x);
  EXPECT_DOUBLE_EQ(m.mean(), 2.5);
  EXPECT_NEAR(m.standard_error(), std::sqrt((2.25 + 0.25 + 0.25 + 2.25) / 3 / 4), 1e-12);
}
