#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "wearsim/pc_table.hpp"
#include "wearsim/policy.hpp"
#include "wearsim/sampler.hpp"
#include "wearsim/stats.hpp"

using namespace wearsim;

namespace
{
// Two-pass oracle kept independent of the library's implementation.
double oracle_variance(const std::vector<double>& xs)
{
  double mean = 0;
  for (double x : xs)
    mean += x;
  mean /= static_cast<double>(xs.size());
  double acc = 0;
  for (double x : xs)
    acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(xs.size());
}

std::uint64_t sampled_set_of(const CacheConfig& cfg, std::size_t slot) { return sampled_sets(cfg).at(slot); }
} // namespace

TEST(Sampler, SetZeroIsSampled) { EXPECT_TRUE(is_sampled_set(0, CacheConfig{})); }

TEST(Sampler, Set1057IsSampled)
{
  // b10 = b5 = b0 = 1: 1024 + 32 + 1 (tests/oracles/derive_expected.py)
  EXPECT_TRUE(is_sampled_set(1057, CacheConfig{}));
  EXPECT_FALSE(is_sampled_set(1056, CacheConfig{}));
}

TEST(Sampler, DefaultGeometrySamples32Sets)
{
  const auto sets = sampled_sets(CacheConfig{});
  ASSERT_EQ(sets.size(), 32u);
  const std::vector<std::uint64_t> expected = {0,    66,   132,  198,  264,  330,  396,  462,  528,  594,  660,  726,  792,  858,  924,  990,
                                               1057, 1123, 1189, 1255, 1321, 1387, 1453, 1519, 1585, 1651, 1717, 1783, 1849, 1915, 1981, 2047};
  EXPECT_EQ(sets, expected);
}

TEST(Sampler, CountMatchesClosedForm)
{
  for (std::uint64_t sets : {64u, 128u, 1024u, 2048u, 8192u}) {
    for (std::uint32_t bits = 0; bits <= 6; ++bits) {
      CacheConfig cfg;
      cfg.num_sets = sets;
      cfg.sample_bits = bits;
      // Equal top and bottom fields leave set_bits - sample_bits free bits; a full-width field matches every set.
      const std::uint64_t expected = bits == log2_exact(sets) ? sets : sets >> bits;
      EXPECT_EQ(sampled_sets(cfg).size(), expected) << sets << " sets, " << bits << " bits";
    }
  }
}

TEST(Variance, ConstantSequenceIsZero)
{
  const std::vector<std::uint64_t> xs{5, 5, 5, 5};
  EXPECT_EQ(population_variance(xs), 0.0);
}

TEST(Variance, HandValues)
{
  const std::vector<std::uint64_t> a{0, 29};
  const std::vector<std::uint64_t> b{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(population_variance(a), 210.25);
  EXPECT_DOUBLE_EQ(population_variance(b), 1.25);
}

TEST(Variance, AgreesWithTwoPassOracle)
{
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10000; ++i) {
    std::vector<std::uint64_t> xs(1 + rng() % 16);
    std::vector<double> ds;
    for (auto& x : xs) {
      x = rng() % 1000001;
      ds.push_back(static_cast<double>(x));
    }
    ASSERT_NEAR(population_variance(xs), oracle_variance(ds), 1e-9 * std::max(1.0, oracle_variance(ds)));
  }
}

TEST(WeightedMean, HandValues)
{
  const std::vector<double> one{42.5};
  const std::vector<double> two{10, 20};
  const std::vector<double> zeros{0, 0, 0};
  const std::vector<double> feedback{100, 10};
  EXPECT_DOUBLE_EQ(weighted_mean(one), 42.5);
  EXPECT_DOUBLE_EQ(weighted_mean(two), 50.0 / 3.0);
  EXPECT_DOUBLE_EQ(weighted_mean(zeros), 0.0);
  EXPECT_DOUBLE_EQ(weighted_mean(feedback), 40.0);
  EXPECT_DOUBLE_EQ(weighted_mean(two, RecencyWeighting::uniform), 15.0);
}

TEST(WeightedMean, LiesWithinHistoryRange)
{
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> dist(0.0, 1e6);
  for (int i = 0; i < 10000; ++i) {
    std::vector<double> h(1 + rng() % 8);
    for (auto& v : h)
      v = dist(rng);
    const double m = weighted_mean(h);
    const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
    ASSERT_GE(m, *lo - 1e-9);
    ASSERT_LE(m, *hi + 1e-9);
  }
}

TEST(CoefficientOfVariation, Basics)
{
  const std::vector<std::uint64_t> zeros(8, 0);
  const std::vector<std::uint64_t> flat(8, 3);
  const std::vector<std::uint64_t> skew{0, 0, 0, 4};
  EXPECT_EQ(coefficient_of_variation(zeros), 0.0);
  EXPECT_EQ(coefficient_of_variation(flat), 0.0);
  EXPECT_DOUBLE_EQ(coefficient_of_variation(skew), std::sqrt(3.0));
}

TEST(DeriveBlockMask, ThresholdEqualityBlocks)
{
  std::vector<std::uint64_t> counts(16, 0);
  counts[4] = 29;
  counts[5] = 28;
  const auto mask = derive_block_mask(counts, 29);
  EXPECT_TRUE(mask.test(4));
  EXPECT_FALSE(mask.test(5));
  EXPECT_EQ(mask.count(), 1);
}

TEST(DeriveBlockMask, AllHotLeavesColdestOpen)
{
  std::vector<std::uint64_t> counts(16, 40);
  counts[9] = 30;
  counts[12] = 30;
  const auto mask = derive_block_mask(counts, 29);
  EXPECT_EQ(mask.count(), 15);
  EXPECT_FALSE(mask.test(9));
}

TEST(DeriveBlockMask, AlwaysLeavesAWayOpen)
{
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    std::vector<std::uint64_t> counts(16);
    for (auto& c : counts)
      c = rng() % 60;
    ASSERT_LT(derive_block_mask(counts, 1 + rng() % 40).count(), 16);
  }
}

TEST(PcTable, UnknownIpReadsZero)
{
  PcTable pc(CacheConfig{});
  EXPECT_EQ(pc.value(0x1234), 0);
  EXPECT_FALSE(pc.blocks(0x1234));
  EXPECT_EQ(pc.find(0x1234), nullptr);
}

TEST(PcTable, FirstFeedbackIsPositive)
{
  PcTable pc(CacheConfig{});
  EXPECT_TRUE(pc.train(0xAA, 57.0));
  EXPECT_EQ(pc.value(0xAA), -1);
  EXPECT_TRUE(pc.blocks(0xAA));
}

TEST(PcTable, WeightedHistoryDecidesDirection)
{
  PcTable pc(CacheConfig{});
  pc.train(0xAA, 100.0);                // -> -1
  EXPECT_TRUE(pc.train(0xAA, 10.0));    // wm(100, 10) = 40, 10 <= 40
  EXPECT_EQ(pc.value(0xAA), -2);
  EXPECT_FALSE(pc.train(0xAA, 1000.0)); // above the weighted mean
  EXPECT_EQ(pc.value(0xAA), -1);
}

TEST(PcTable, InvertedFeedbackFlipsDirection)
{
  CacheConfig cfg;
  cfg.invert_feedback = true;
  PcTable pc(cfg);
  EXPECT_FALSE(pc.train(0xAA, 5.0));
  EXPECT_EQ(pc.value(0xAA), 1);
}

TEST(PcTable, SaturatesAtLimit)
{
  CacheConfig cfg;
  cfg.pc_limit = 3;
  PcTable pc(cfg);
  for (int i = 0; i < 10; ++i)
    pc.train(0xAA, 0.0);
  EXPECT_EQ(pc.value(0xAA), -3);
  for (int i = 0; i < 10; ++i)
    pc.train(0xBB, static_cast<double>(i));
  EXPECT_LE(pc.value(0xBB), 3);
}

TEST(PcTable, VarianceHistoryIsBoundedByDepth)
{
  PcTable pc(CacheConfig{});
  for (int i = 0; i < 20; ++i)
    pc.train(0xAA, static_cast<double>(i));
  const auto* entry = pc.find(0xAA);
  ASSERT_NE(entry, nullptr);
  ASSERT_EQ(entry->variance_history.size(), 8u);
  EXPECT_EQ(entry->variance_history[0], 12.0);
  EXPECT_EQ(entry->variance_history.back(), 19.0);
}

TEST(PcTable, ValuesStayInBoundsUnderRandomTraining)
{
  CacheConfig cfg;
  cfg.pc_limit = 4;
  PcTable pc(cfg);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> var(0.0, 500.0);
  for (int i = 0; i < 100000; ++i) {
    const InstrPtr ip = rng() % 32;
    pc.train(ip, var(rng));
    ASSERT_GE(pc.value(ip), -4);
    ASSERT_LE(pc.value(ip), 4);
  }
}

TEST(NonePolicy, MasksStayEmpty)
{
  NonePolicy none;
  for (int i = 0; i < 100; ++i)
    none.record_wear_event(0, 0, 0x1);
  none.on_interval_boundary();
  EXPECT_TRUE(none.block_mask(0).none());
  EXPECT_FALSE(none.blocks_write(5, 0x1));
  EXPECT_EQ(none.counter_sets(), 0u);
}

TEST(ThresholdPolicy, BlocksHotWayInNextInterval)
{
  CacheConfig cfg;
  ThresholdPolicy policy(cfg);
  EXPECT_EQ(policy.counter_sets(), 2048u);
  for (int i = 0; i < 30; ++i)
    policy.record_wear_event(5, 0, 0x1); // set 5 is unsampled: threshold-only tracks all sets
  policy.record_wear_event(5, 1, 0x1);
  policy.on_interval_boundary();
  EXPECT_TRUE(policy.block_mask(5).test(0));
  EXPECT_FALSE(policy.block_mask(5).test(1));
  EXPECT_EQ(policy.counts(5)[0], 0u);
  policy.on_interval_boundary();
  EXPECT_TRUE(policy.block_mask(5).none());
}

TEST(ProposedPolicy, AllocatesCountersOnlyForSampledSets)
{
  ProposedPolicy policy{CacheConfig{}};
  EXPECT_EQ(policy.counter_sets(), 32u);
}

TEST(ProposedPolicy, RecordsLastWriterPerCell)
{
  ProposedPolicy policy{CacheConfig{}};
  policy.record_wear_event(0, 3, 0xA);
  policy.record_wear_event(0, 3, 0xB);
  EXPECT_EQ(policy.counters(0)[3], (WayCounter{2, 0xB}));

  policy.record_wear_event(1, 3, 0xC); // unsampled
  for (std::size_t slot = 0; slot < 32; ++slot)
    for (std::uint32_t w = 0; w < 16; ++w)
      if (!(slot == 0 && w == 3))
        ASSERT_EQ(policy.counters(slot)[w].write_count, 0u);

  policy.on_interval_boundary();
  policy.record_wear_event(0, 3, 0xD);
  EXPECT_EQ(policy.counters(0)[3], (WayCounter{1, 0xD}));
}

TEST(ProposedPolicy, IdleBoundaryArchivesZeroSnapshot)
{
  ProposedPolicy policy{CacheConfig{}};
  policy.on_interval_boundary();
  for (std::size_t slot = 0; slot < 32; ++slot) {
    ASSERT_EQ(policy.history(slot).size(), 1u);
    ASSERT_EQ(policy.history(slot).back(), CounterSnapshot(16));
    ASSERT_TRUE(policy.block_mask(sampled_set_of(CacheConfig{}, slot)).none());
  }
  EXPECT_TRUE(policy.pending().empty());
  EXPECT_EQ(policy.pc_table().size(), 0u);
}

TEST(ProposedPolicy, HistoryRingHoldsAtMostKSnapshots)
{
  ProposedPolicy policy{CacheConfig{}};
  for (int b = 1; b <= 12; ++b) {
    policy.record_wear_event(0, 0, static_cast<InstrPtr>(b));
    policy.on_interval_boundary();
    ASSERT_EQ(policy.history(0).size(), static_cast<std::size_t>(std::min(b, 8)));
  }
  // Oldest first: after 12 boundaries the ring holds boundaries 5..12.
  EXPECT_EQ(policy.history(0)[0][0].last_ip, 5u);
  EXPECT_EQ(policy.history(0).back()[0].last_ip, 12u);
}

TEST(ProposedPolicy, BlockQueuesFeedbackForItsLastWriter)
{
  ProposedPolicy policy{CacheConfig{}};
  const std::uint64_t set = 1057;
  const auto slot = static_cast<std::size_t>(policy.samples().slot(set));
  for (int i = 0; i < 29; ++i)
    policy.record_wear_event(set, 5, 0xA);
  policy.record_wear_event(set, 5, 0xB);
  policy.on_interval_boundary();

  EXPECT_TRUE(policy.block_mask(set).test(5));
  EXPECT_EQ(policy.block_mask(set).count(), 1);
  ASSERT_EQ(policy.pending().size(), 1u);
  EXPECT_EQ(policy.pending()[0], (PendingFeedback{0xB, set}));
  EXPECT_EQ(policy.history(slot).back()[5], (WayCounter{30, 0xB}));
  EXPECT_EQ(policy.pc_table().value(0xB), 0);

  // Next interval: feedback uses the pre-reset counts of that interval.
  for (std::uint32_t w = 0; w < 16; ++w)
    policy.record_wear_event(set, w, 0xC);
  policy.on_interval_boundary();
  EXPECT_EQ(policy.pc_table().value(0xB), -1);
  const auto* entry = policy.pc_table().find(0xB);
  ASSERT_NE(entry, nullptr);
  ASSERT_EQ(entry->variance_history.size(), 1u);
  EXPECT_EQ(entry->variance_history[0], 0.0);
  EXPECT_TRUE(policy.pending().empty());
  EXPECT_TRUE(policy.block_mask(set).none());
}

TEST(ProposedPolicy, SameIpBlockingTwoSetsQueuesTwoEntries)
{
  ProposedPolicy policy{CacheConfig{}};
  for (int i = 0; i < 40; ++i) {
    policy.record_wear_event(66, 1, 0xA);
    policy.record_wear_event(0, 2, 0xA);
  }
  policy.on_interval_boundary();
  ASSERT_EQ(policy.pending().size(), 2u);
  EXPECT_EQ(policy.pending()[0], (PendingFeedback{0xA, 0}));
  EXPECT_EQ(policy.pending()[1], (PendingFeedback{0xA, 66}));
  policy.on_interval_boundary();
  EXPECT_EQ(policy.pc_table().value(0xA), -2);
}

TEST(ProposedPolicy, UnsampledWritesFollowPcSign)
{
  ProposedPolicy policy{CacheConfig{}};
  EXPECT_FALSE(policy.blocks_write(1, 0xA));
  policy.pc_table().train(0xA, 1.0);
  EXPECT_TRUE(policy.blocks_write(1, 0xA));
  EXPECT_FALSE(policy.blocks_write(0, 0xA)); // sampled sets use their own masks
}

TEST(PolicyKind, ParseRoundTrip)
{
  for (auto k : {PolicyKind::none, PolicyKind::threshold, PolicyKind::proposed})
    EXPECT_EQ(parse_policy_kind(to_string(k)), k);
  EXPECT_THROW(parse_policy_kind("lru"), ConfigError);
}
