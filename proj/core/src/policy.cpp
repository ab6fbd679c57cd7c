#include "wearsim/policy.hpp"

#include <algorithm>

#include <fmt/core.h>

#include "wearsim/stats.hpp"

namespace wearsim
{

std::string_view to_string(PolicyKind kind)
{
  switch (kind) {
  case PolicyKind::none:
    return "none";
  case PolicyKind::threshold:
    return "threshold";
  case PolicyKind::proposed:
    return "proposed";
  }
  return "none";
}

PolicyKind parse_policy_kind(std::string_view name)
{
  if (name == "none")
    return PolicyKind::none;
  if (name == "threshold")
    return PolicyKind::threshold;
  if (name == "proposed")
    return PolicyKind::proposed;
  throw ConfigError(fmt::format("unknown policy '{}' (expected none, threshold or proposed)", name));
}

WayMask derive_block_mask(std::span<const std::uint64_t> counts, std::uint32_t threshold)
{
  WayMask mask;
  for (std::uint32_t way = 0; way < counts.size(); ++way)
    if (counts[way] >= threshold)
      mask.set(way);

  const auto num_ways = static_cast<std::uint32_t>(counts.size());
  if (num_ways > 0 && mask == WayMask::all(num_ways)) {
    auto coldest = std::min_element(counts.begin(), counts.end());
    mask.reset(static_cast<std::uint32_t>(coldest - counts.begin()));
  }
  return mask;
}

std::unique_ptr<WearPolicy> make_policy(PolicyKind kind, const CacheConfig& cfg)
{
  switch (kind) {
  case PolicyKind::none:
    return std::make_unique<NonePolicy>();
  case PolicyKind::threshold:
    return std::make_unique<ThresholdPolicy>(cfg);
  case PolicyKind::proposed:
    return std::make_unique<ProposedPolicy>(cfg);
  }
  return std::make_unique<NonePolicy>();
}

ThresholdPolicy::ThresholdPolicy(const CacheConfig& cfg)
    : num_ways_(cfg.num_ways), threshold_(cfg.threshold), counts_(cfg.num_sets * cfg.num_ways, 0), masks_(cfg.num_sets)
{
}

void ThresholdPolicy::record_wear_event(std::uint64_t set, std::uint32_t way, InstrPtr) { ++counts_[set * num_ways_ + way]; }

void ThresholdPolicy::on_interval_boundary()
{
  for (std::uint64_t set = 0; set < masks_.size(); ++set)
    masks_[set] = derive_block_mask(counts(set), threshold_);
  std::fill(counts_.begin(), counts_.end(), 0);
}

ProposedPolicy::ProposedPolicy(const CacheConfig& cfg)
    : cfg_(cfg), num_ways_(cfg.num_ways), samples_(cfg), counters_(samples_.size() * cfg.num_ways),
      history_(samples_.size(), BoundedHistory<CounterSnapshot>(cfg.history_depth)), sampled_masks_(samples_.size()), pc_(cfg)
{
}

void ProposedPolicy::record_wear_event(std::uint64_t set, std::uint32_t way, InstrPtr ip)
{
  const int slot = samples_.slot(set);
  if (slot < 0)
    return;
  auto& counter = counters_[static_cast<std::size_t>(slot) * num_ways_ + way];
  ++counter.write_count;
  counter.last_ip = ip;
}

WayMask ProposedPolicy::block_mask(std::uint64_t set) const
{
  const int slot = samples_.slot(set);
  return slot < 0 ? WayMask{} : sampled_masks_[static_cast<std::size_t>(slot)];
}

bool ProposedPolicy::blocks_write(std::uint64_t set, InstrPtr ip) const { return !samples_.sampled(set) && pc_.blocks(ip); }

std::vector<std::uint64_t> ProposedPolicy::counts_of(std::size_t slot) const
{
  std::vector<std::uint64_t> counts(num_ways_);
  auto row = counters(slot);
  std::transform(row.begin(), row.end(), counts.begin(), [](const WayCounter& c) { return c.write_count; });
  return counts;
}

void ProposedPolicy::apply_feedback()
{
  for (const auto& [ip, set] : pending_) {
    const auto counts = counts_of(static_cast<std::size_t>(samples_.slot(set)));
    pc_.train(ip, population_variance(std::span<const std::uint64_t>(counts)));
  }
  pending_.clear();
}

void ProposedPolicy::on_interval_boundary()
{
  apply_feedback();

  for (std::size_t slot = 0; slot < samples_.size(); ++slot) {
    auto row = counters(slot);
    history_[slot].push(CounterSnapshot(row.begin(), row.end()));

    const WayMask mask = derive_block_mask(counts_of(slot), cfg_.threshold);
    for (std::uint32_t way = 0; way < num_ways_; ++way)
      if (mask.test(way))
        on_block_applied(row[way].last_ip, samples_.sets()[slot]);
    sampled_masks_[slot] = mask;
  }

  std::fill(counters_.begin(), counters_.end(), WayCounter{});
}

} // namespace wearsim
