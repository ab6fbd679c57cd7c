#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "wearsim/bounded_history.hpp"
#include "wearsim/cache.hpp"
#include "wearsim/config.hpp"
#include "wearsim/pc_table.hpp"
#include "wearsim/sampler.hpp"

namespace wearsim
{

enum class PolicyKind { none, threshold, proposed };

std::string_view to_string(PolicyKind kind);
PolicyKind parse_policy_kind(std::string_view name);

struct WayCounter {
  std::uint64_t write_count = 0;
  InstrPtr last_ip = 0;

  bool operator==(const WayCounter&) const = default;
};

// Per-way counters of one set for one interval.
using CounterSnapshot = std::vector<WayCounter>;

// Blocks every way whose count reached `threshold`. If that would block the whole set,
// the way with the smallest count (lowest index on ties) stays unblocked.
WayMask derive_block_mask(std::span<const std::uint64_t> counts, std::uint32_t threshold);

// Common hooks of the wear-leveling policies. The engine reports every wear event,
// reads block masks after each interval boundary, and asks whether a write miss to
// a set without counters should mask its default victim.
class WearPolicy
{
public:
  virtual ~WearPolicy() = default;

  virtual PolicyKind kind() const = 0;
  virtual void record_wear_event(std::uint64_t set, std::uint32_t way, InstrPtr ip) = 0;
  virtual WayMask block_mask(std::uint64_t set) const = 0;
  virtual bool blocks_write(std::uint64_t set, InstrPtr ip) const = 0;
  virtual void on_interval_boundary() = 0;

  // Number of sets that carry interval counters.
  virtual std::size_t counter_sets() const = 0;
};

std::unique_ptr<WearPolicy> make_policy(PolicyKind kind, const CacheConfig& cfg);

class NonePolicy final : public WearPolicy
{
public:
  PolicyKind kind() const override { return PolicyKind::none; }
  void record_wear_event(std::uint64_t, std::uint32_t, InstrPtr) override {}
  WayMask block_mask(std::uint64_t) const override { return {}; }
  bool blocks_write(std::uint64_t, InstrPtr) const override { return false; }
  void on_interval_boundary() override {}
  std::size_t counter_sets() const override { return 0; }
};

// Threshold-only blocking on every set: no sampling, no feedback.
class ThresholdPolicy final : public WearPolicy
{
public:
  explicit ThresholdPolicy(const CacheConfig& cfg);

  PolicyKind kind() const override { return PolicyKind::threshold; }
  void record_wear_event(std::uint64_t set, std::uint32_t way, InstrPtr ip) override;
  WayMask block_mask(std::uint64_t set) const override { return masks_[set]; }
  bool blocks_write(std::uint64_t, InstrPtr) const override { return false; }
  void on_interval_boundary() override;
  std::size_t counter_sets() const override { return masks_.size(); }

  std::span<const std::uint64_t> counts(std::uint64_t set) const { return {counts_.data() + set * num_ways_, num_ways_}; }

private:
  std::uint32_t num_ways_;
  std::uint32_t threshold_;
  std::vector<std::uint64_t> counts_;
  std::vector<WayMask> masks_;
};

struct PendingFeedback {
  InstrPtr ip = 0;
  std::uint64_t set = 0;

  bool operator==(const PendingFeedback&) const = default;
};

// Sampled-set blocking with variance feedback into a PC table. Only sampled sets keep
// interval counters and a k-deep history; unsampled sets are steered by the PC table.
class ProposedPolicy final : public WearPolicy
{
public:
  explicit ProposedPolicy(const CacheConfig& cfg);

  PolicyKind kind() const override { return PolicyKind::proposed; }
  void record_wear_event(std::uint64_t set, std::uint32_t way, InstrPtr ip) override;
  WayMask block_mask(std::uint64_t set) const override;
  bool blocks_write(std::uint64_t set, InstrPtr ip) const override;

  // In order: train the PC table on pending blocks using the current counts, archive the
  // counts, derive next masks for sampled sets (queueing their blocks for feedback),
  // then zero the counters.
  void on_interval_boundary() override;
  std::size_t counter_sets() const override { return samples_.size(); }

  // Individual steps of on_interval_boundary(), exposed for inspection.
  void apply_feedback();
  void on_block_applied(InstrPtr ip, std::uint64_t set) { pending_.push_back({ip, set}); }

  const SampleIndex& samples() const { return samples_; }
  const PcTable& pc_table() const { return pc_; }
  PcTable& pc_table() { return pc_; }
  const std::vector<PendingFeedback>& pending() const { return pending_; }
  std::span<const WayCounter> counters(std::size_t slot) const { return {counters_.data() + slot * num_ways_, num_ways_}; }
  const BoundedHistory<CounterSnapshot>& history(std::size_t slot) const { return history_[slot]; }

private:
  std::vector<std::uint64_t> counts_of(std::size_t slot) const;

  CacheConfig cfg_;
  std::uint32_t num_ways_;
  SampleIndex samples_;
  std::vector<WayCounter> counters_;
  std::vector<BoundedHistory<CounterSnapshot>> history_;
  std::vector<WayMask> sampled_masks_;
  std::vector<PendingFeedback> pending_;
  PcTable pc_;
};

} // namespace wearsim
