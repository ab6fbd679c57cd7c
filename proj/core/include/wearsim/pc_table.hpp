#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wearsim/bounded_history.hpp"
#include "wearsim/cache.hpp"
#include "wearsim/config.hpp"

namespace wearsim
{

struct PcEntry {
  std::int32_t value = 0;
  BoundedHistory<double> variance_history;

  bool operator==(const PcEntry&) const = default;
};

// Signed saturating value per instruction pointer, plus the variances observed after
// that IP's past blocks. Unknown IPs read as value 0 with no history.
class PcTable
{
public:
  explicit PcTable(const CacheConfig& cfg);

  std::int32_t value(InstrPtr ip) const;
  const PcEntry* find(InstrPtr ip) const;

  // Writes from an IP with a negative value are blocked in unsampled sets.
  bool blocks(InstrPtr ip) const { return value(ip) < 0; }

  // Appends `variance` to the IP's history and compares it with the recency-weighted
  // mean of that history. At or below the mean is a positive impact and moves the
  // value one step toward blocking (down); otherwise one step up. Returns whether the
  // impact was judged positive.
  bool train(InstrPtr ip, double variance);

  std::size_t size() const { return entries_.size(); }
  std::int32_t limit() const { return limit_; }

  // (ip, value) pairs in ascending ip order.
  std::vector<std::pair<InstrPtr, std::int32_t>> sorted_values() const;

  bool operator==(const PcTable&) const = default;

private:
  std::int32_t limit_;
  std::size_t depth_;
  RecencyWeighting weighting_;
  bool invert_;
  std::unordered_map<InstrPtr, PcEntry> entries_;
};

} // namespace wearsim
