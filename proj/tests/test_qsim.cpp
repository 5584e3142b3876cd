#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qrom/experiments/lemmas.hpp"
#include "qrom/experiments/search.hpp"
#include "qrom/qsim/bht.hpp"
#include "qrom/qsim/circuit.hpp"
#include "qrom/qsim/distance.hpp"
#include "qrom/qsim/grover.hpp"
#include "qrom/qsim/oracle_table.hpp"
#include "qrom/qsim/state_vector.hpp"

using namespace qrom;
using namespace qrom::qsim;

namespace {

// Index of basis state |x>|y> with x in the low `in_bits` qubits.
std::uint64_t idx(std::uint64_t x, std::uint64_t y, unsigned in_bits) { return x | (y << in_bits); }

StateVector two_branch(double p0, unsigned a, unsigned b) {
  // sqrt(p0)|0,a> + sqrt(1-p0)|1,b> on one input qubit and two output qubits.
  std::vector<Amplitude> amps(8, 0.0);
  amps[idx(0, a, 1)] = std::sqrt(p0);
  amps[idx(1, b, 1)] = std::sqrt(1.0 - p0);
  return StateVector::from_amplitudes(std::move(amps));
}

}  // namespace

TEST(StateVector, CapIsEnforced) {
  EXPECT_THROW(StateVector(25), std::invalid_argument);
  EXPECT_NO_THROW(StateVector(10, 10));
  EXPECT_THROW(StateVector(11, 10), std::invalid_argument);
}

TEST(StateVector, GatesKeepNormalization) {
  auto rng = make_rng(3);
  auto s = StateVector::random(6, rng);
  for (int i = 0; i < 50; ++i) {
    s.hadamard(i % 6);
    s.ry((i + 1) % 6, 0.3 * i);
    s.rz((i + 2) % 6, 0.7 * i);
    s.cnot(i % 6, (i + 3) % 6);
    s.phase_if({0, 3}, i % 8, 1.1);
    s.diffuse({2, 3});
    ASSERT_TRUE(s.is_normalized());
  }
}

TEST(StateVector, NonNormalizedAmplitudesRejected) {
  EXPECT_THROW(StateVector::from_amplitudes({1.0, 1.0}), std::invalid_argument);
}

TEST(XorOracle, WritesValueIntoZeroRegister) {
  const OracleTable o(2, 2, {3, 1, 2, 0});
  for (std::uint64_t x = 0; x < 4; ++x) {
    auto s = StateVector::basis(4, idx(x, 0, 2));
    apply_xor_oracle(s, o, {0, 2}, {2, 2});
    EXPECT_DOUBLE_EQ(std::abs(s.amplitude(idx(x, o(x), 2))), 1.0);
  }
}

TEST(XorOracle, IsAnInvolution) {
  auto rng = make_rng(4);
  const auto o = OracleTable::random(3, 2, rng);
  const auto s0 = StateVector::random(6, rng);
  auto s = s0;
  apply_xor_oracle(s, o, {0, 3}, {3, 2});
  EXPECT_GT(euclidean_distance(s, s0), 1e-3);
  apply_xor_oracle(s, o, {0, 3}, {3, 2});
  EXPECT_LT(euclidean_distance(s, s0), 1e-12);
  EXPECT_TRUE(s.is_normalized());
}

TEST(XorOracle, TraceOfUniformSuperposition) {
  const OracleTable o(2, 1, {0, 1, 1, 0});
  StateVector s(3);
  s.hadamard({0, 2});
  QueryTrace tr;
  apply_xor_oracle(s, o, {0, 2}, {2, 1}, &tr);
  apply_xor_oracle(s, o, {0, 2}, {2, 1}, &tr);
  ASSERT_EQ(tr.size(), 2u);
  for (std::uint64_t r = 0; r < 4; ++r) EXPECT_NEAR(tr.mass(0, r), 0.25, 1e-12);
  EXPECT_NEAR(tr.entry(1).total, 1.0, 1e-9);
  EXPECT_NEAR(tr.total_mass(2), 0.5, 1e-12);
}

TEST(XorOracle, RejectsBadRegisters) {
  const OracleTable o(2, 1, {0, 1, 1, 0});
  StateVector s(3);
  EXPECT_THROW(apply_xor_oracle(s, o, {0, 2}, {1, 1}), std::invalid_argument);
  EXPECT_THROW(apply_xor_oracle(s, o, {0, 1}, {2, 1}), std::invalid_argument);
  EXPECT_ANY_THROW(apply_xor_oracle(s, o, {0, 2}, {3, 1}));
}

TEST(QueryTrace, WideRegistersRecordOnlyWatchedInputs) {
  const auto o = OracleTable::from_function(13, 1, [](std::uint64_t x) { return x & 1; });
  StateVector s(14);
  s.hadamard({0, 13});
  QueryTrace tr({5, 77});
  apply_xor_oracle(s, o, {0, 13}, {13, 1}, &tr);
  EXPECT_TRUE(tr.entry(0).full.empty());
  EXPECT_NEAR(tr.mass(0, 77), 1.0 / 8192, 1e-15);
  EXPECT_THROW(tr.mass(0, 6), std::out_of_range);
}

TEST(PartialMeasure, BasisStateIsDeterministic) {
  auto rng = make_rng(5);
  auto s = StateVector::basis(3, idx(1, 2, 1));
  EXPECT_EQ(partial_measure(s, {0, 1}, rng), 1u);
  EXPECT_DOUBLE_EQ(std::abs(s.amplitude(idx(1, 2, 1))), 1.0);
}

TEST(PartialMeasure, CollapsesToMatchingBranch) {
  auto rng = make_rng(6);
  int zeros = 0;
  for (int i = 0; i < 1000; ++i) {
    auto s = two_branch(0.5, 1, 3);
    const auto out = partial_measure(s, {0, 1}, rng);
    zeros += out == 0;
    EXPECT_NEAR(std::abs(s.amplitude(out == 0 ? idx(0, 1, 1) : idx(1, 3, 1))), 1.0, 1e-12);
  }
  EXPECT_NEAR(zeros / 1000.0, 0.5, 4 * std::sqrt(0.25 / 1000));
}

TEST(PartialMeasure, FrequencyMatchesSquaredAmplitude) {
  auto rng = make_rng(7);
  const auto base = two_branch(0.36, 0, 1);
  int zeros = 0;
  for (int i = 0; i < 100000; ++i) {
    auto s = base;
    zeros += partial_measure(s, {0, 1}, rng) == 0;
  }
  EXPECT_NEAR(zeros / 100000.0, 0.36, 0.01);
}

TEST(Distance, EuclideanExamples) {
  const auto zero = StateVector::basis(1, 0), one = StateVector::basis(1, 1);
  StateVector plus(1);
  plus.hadamard(0);
  EXPECT_DOUBLE_EQ(euclidean_distance(zero, zero), 0.0);
  EXPECT_NEAR(euclidean_distance(zero, one), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(euclidean_distance(zero, plus), std::sqrt(2.0 - std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(euclidean_distance(zero, plus), 0.7654, 1e-4);
  EXPECT_THROW(euclidean_distance(zero, StateVector(2)), std::invalid_argument);
}

TEST(Distance, TotalVariationExamples) {
  const std::vector<double> a{1, 0}, b{0, 1}, u{0.5, 0.5}, s{0.75, 0.25};
  EXPECT_DOUBLE_EQ(total_variation(a, a), 0.0);
  EXPECT_DOUBLE_EQ(total_variation(a, b), 2.0);
  EXPECT_DOUBLE_EQ(total_variation(u, s), 0.5);
  EXPECT_THROW(total_variation(a, std::vector<double>{1, 0, 0}), std::invalid_argument);
  EXPECT_THROW(total_variation(a, std::vector<double>{0.5, 0.6}), std::invalid_argument);
}

TEST(Grover, FourItemsOneIterationIsExact) {
  EXPECT_NEAR(experiments::grover_n4_marked_amplitude(), 1.0, 1e-9);
  EXPECT_NEAR(grover_success_probability(4, 1, 1), 1.0, 1e-12);
}

TEST(Grover, SixteenItemsThreeIterations) {
  const double expected = std::pow(std::sin(7 * std::asin(0.25)), 2);
  EXPECT_NEAR(grover_success_probability(16, 1, 3), expected, 1e-12);
  EXPECT_NEAR(expected, 0.9613, 1e-4);
  auto rng = make_rng(8);
  const OracleTable ind = OracleTable::from_function(4, 1, [](std::uint64_t x) { return x == 11 ? 1u : 0u; });
  int hits = 0;
  for (int i = 0; i < 10000; ++i) hits += grover_search(ind, 3, rng).outcome == 11;
  EXPECT_NEAR(hits / 10000.0, expected, 0.01);
}

TEST(Grover, AllMarkedAlwaysSucceeds) {
  auto rng = make_rng(9);
  const OracleTable ind(1, 1, {1, 1});
  for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(ind(grover_search(ind, k, rng).outcome), 1u);
}

TEST(Grover, NothingMarkedIsAnError) {
  auto rng = make_rng(10);
  EXPECT_THROW(grover_search(OracleTable(2, 1, {0, 0, 0, 0}), 1, rng), std::invalid_argument);
}

TEST(Grover, TraceHasOneEntryPerIteration) {
  const OracleTable ind(3, 1, {0, 0, 0, 1, 0, 0, 0, 0});
  QueryTrace tr;
  grover_prepare(ind, 2, &tr);
  EXPECT_EQ(tr.size(), 2u);
}

TEST(Bht, ConstantHashGivesValidPairs) {
  const auto h = OracleTable::from_function(6, 6, [](std::uint64_t) { return 42u; });
  for (int t = 0; t < 20; ++t) {
    auto rng = make_rng(100 + t);
    const auto r = bht_collision(h, rng);
    ASSERT_TRUE(r.collision);
    EXPECT_NE(r.collision->m, r.collision->m_prime);
    EXPECT_EQ(h(r.collision->m), h(r.collision->m_prime));
  }
}

TEST(Bht, SixBitHashSucceedsAtLeastHalfTheTimeWithinBudget) {
  std::size_t ok = 0, worst = 0;
  const std::size_t limit = kBhtEvaluationConstant * ceil_cbrt_pow2(6);
  EXPECT_EQ(limit, 8u);
  for (int t = 0; t < 200; ++t) {
    auto rng = make_rng(derive_seed(11, t));
    const auto h = OracleTable::random(8, 6, rng);
    EvaluationCounter counter;
    const auto r = bht_collision(h, rng, &counter);
    EXPECT_EQ(counter.spent(), r.evaluations);
    worst = std::max(worst, r.evaluations);
    if (r.collision) {
      ASSERT_NE(r.collision->m, r.collision->m_prime);
      ASSERT_EQ(h(r.collision->m), h(r.collision->m_prime));
      ++ok;
    }
  }
  EXPECT_GE(ok / 200.0, 0.5);
  EXPECT_LE(worst, limit);
}

TEST(Resample, EmptySetKeepsTable) {
  auto rng = make_rng(12);
  const auto o = OracleTable::random(4, 3, rng);
  EXPECT_EQ(resample_oracle_at(o, {}, rng), o);
}

TEST(Resample, FullDomainAgreesAtChanceRate) {
  auto rng = make_rng(13);
  const auto o = OracleTable::random(12, 2, rng);
  std::vector<std::uint64_t> all(o.size());
  for (std::uint64_t x = 0; x < o.size(); ++x) all[x] = x;
  const auto o2 = resample_oracle_at(o, all, rng);
  std::size_t same = 0;
  for (std::uint64_t x = 0; x < o.size(); ++x) same += o(x) == o2(x);
  EXPECT_NEAR(double(same) / o.size(), 0.25, 4 * std::sqrt(0.25 * 0.75 / o.size()));
}

TEST(Resample, ThreeQueriesWithMassOneTenth) {
  // Input qubit 0 carries mass 0.1/3 on r = 1 before each of three queries.
  const double a = 2 * std::asin(std::sqrt(0.1 / 3));
  Script s(2, 2);
  s.ry(0, a).query().query().query();
  auto rng = make_rng(14);
  const OracleTable o(2, 2, {0, 1, 2, 3});
  const std::vector<std::uint64_t> set{1};
  QueryTrace tr;
  const auto f1 = s.run(o, &tr);
  EXPECT_NEAR(tr.set_mass(set), 0.1, 1e-12);
  for (int i = 0; i < 20; ++i) {
    const auto o2 = resample_oracle_at(o, set, rng);
    EXPECT_LE(euclidean_distance(f1, s.run(o2)), std::sqrt(0.3) + 1e-6);
  }
}

TEST(NearUniformSampler, PointMassAndUniform) {
  auto rng = make_rng(15);
  std::vector<double> point(4, 0.0);
  point[2] = 1.0;
  const auto c = sample_near_uniform_oracle(5, 2, point, rng);
  EXPECT_EQ(c.count_equal(2), c.size());
  const std::vector<double> u(4, 0.25);
  const auto r = sample_near_uniform_oracle(10, 2, u, rng);
  for (std::uint64_t v = 0; v < 4; ++v) EXPECT_NEAR(r.count_equal(v) / 1024.0, 0.25, 0.06);
  EXPECT_THROW(sample_near_uniform_oracle(3, 2, std::vector<double>{0.5, 0.5, 0.5, 0.5}, rng), std::invalid_argument);
}

TEST(Circuit, ExactOutputDistributionMatchesSampledOracles) {
  auto rng = make_rng(16);
  const auto s = random_script(2, 1, 0, 2, rng);
  const std::vector<double> d{0.7, 0.3};
  const QubitRange all{0, s.num_qubits()};
  const auto exact = exact_output_distribution(s, d, all);
  std::vector<double> mc(exact.size(), 0.0);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto o = sample_near_uniform_oracle(2, 1, d, rng);
    const auto p = s.run(o).marginal(all);
    for (std::size_t v = 0; v < p.size(); ++v) mc[v] += p[v] / n;
  }
  for (std::size_t v = 0; v < exact.size(); ++v) EXPECT_NEAR(mc[v], exact[v], 0.01);
}

TEST(Circuit, StopBeforeQueryReturnsIntermediateState) {
  Script s(1, 1);
  s.h(0).query().h(0);
  const OracleTable o(1, 1, {1, 0});
  const auto before = s.run([&](std::size_t) -> const OracleTable& { return o; }, nullptr, 0);
  EXPECT_NEAR(before.marginal({0, 1})[1], 0.5, 1e-12);
}

// Property suites over randomized instances.

TEST(LemmaProperties, TotalVariationAtMostFourTimesDistance) {
  const auto row = experiments::lemma1_suite(150, 17);
  EXPECT_TRUE(row.pass) << "worst ratio " << row.worst_ratio;
}

TEST(LemmaProperties, GeometricSqrtMassWithinGamma) {
  const auto row = experiments::geometric_suite(150, 18);
  EXPECT_TRUE(row.pass) << "worst ratio " << row.worst_ratio;
}

TEST(LemmaProperties, ResampledDistanceAtMostTwiceSqrtTEps) {
  const auto row = experiments::lemma2_suite(150, 19, 2.0);
  EXPECT_TRUE(row.pass) << "worst ratio " << row.worst_ratio;
}

TEST(LemmaProperties, OneQueryCounterexampleToSqrtTEps) {
  // Mass eps on r = 1 and one query; O' differs from O at r.
  const double eps = 0.1;
  Script s(1, 1);
  s.ry(0, 2 * std::asin(std::sqrt(eps))).query();
  const OracleTable o(1, 1, {0, 0}), o2(1, 1, {0, 1});
  const double d = euclidean_distance(s.run(o), s.run(o2));
  EXPECT_NEAR(d, std::sqrt(2 * eps), 1e-12);
  EXPECT_GT(d, std::sqrt(eps));
  EXPECT_LE(d, 2 * std::sqrt(eps));
}

TEST(LemmaProperties, NearUniformOracleBound) {
  const auto row = experiments::near_uniform_suite({0.01, 0.05}, 3, 2, 20);
  EXPECT_TRUE(row.pass) << "worst ratio " << row.worst_ratio;
}

TEST(LemmaProperties, PreimageMassBound) {
  const auto row = experiments::preimage_mass_suite({4, 6}, 4, 200, 21);
  EXPECT_TRUE(row.pass) << "worst ratio " << row.worst_ratio;
}

TEST(LemmaProperties, PreimageSearchBeatsUniformQuerying) {
  // The two-query search raises the mass on preimages well above q / 2^m.
  const auto s = experiments::preimage_search_script(4, 4, 2);
  auto rng = make_rng(22);
  MeanAccumulator acc;
  for (int k = 0; k < 300; ++k) {
    const auto o = OracleTable::random(4, 4, rng);
    std::vector<std::uint64_t> pre;
    for (std::uint64_t x = 0; x < 16; ++x)
      if (o(x) == 0) pre.push_back(x);
    QueryTrace tr;
    s.run(o, &tr);
    acc.add(tr.set_mass(pre));
  }
  EXPECT_GT(acc.mean(), 2.0 / 16);
  EXPECT_LE(acc.mean(), 2.0 * 8 / 16 + 3 * acc.standard_error());
}
