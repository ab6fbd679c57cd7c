#include "wearsim/pc_table.hpp"

#include <algorithm>

#include "wearsim/stats.hpp"

namespace wearsim
{

PcTable::PcTable(const CacheConfig& cfg)
    : limit_(cfg.pc_limit), depth_(cfg.history_depth), weighting_(cfg.recency_weighting), invert_(cfg.invert_feedback)
{
}

std::int32_t PcTable::value(InstrPtr ip) const
{
  const auto* entry = find(ip);
  return entry ? entry->value : 0;
}

const PcEntry* PcTable::find(InstrPtr ip) const
{
  auto it = entries_.find(ip);
  return it == entries_.end() ? nullptr : &it->second;
}

bool PcTable::train(InstrPtr ip, double variance)
{
  auto [it, inserted] = entries_.try_emplace(ip);
  auto& entry = it->second;
  if (inserted)
    entry.variance_history = BoundedHistory<double>(depth_);

  entry.variance_history.push(variance);
  const double mean = weighted_mean(entry.variance_history.items(), weighting_);
  const bool positive = (variance <= mean) != invert_;
  if (positive)
    entry.value = std::max(entry.value - 1, -limit_);
  else
    entry.value = std::min(entry.value + 1, limit_);
  return positive;
}

std::vector<std::pair<InstrPtr, std::int32_t>> PcTable::sorted_values() const
{
  std::vector<std::pair<InstrPtr, std::int32_t>> out;
  out.reserve(entries_.size());
  for (const auto& [ip, entry] : entries_)
    out.emplace_back(ip, entry.value);
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace wearsim
