#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "wearsim/cache.hpp"
#include "wearsim/config.hpp"
#include "wearsim/metrics.hpp"
#include "wearsim/policy.hpp"
#include "wearsim/sampler.hpp"
#include "wearsim/trace.hpp"

namespace wearsim
{

// Trace-driven LLC model. Records must arrive in non-decreasing cycle order; interval
// boundaries fall on multiples of interval_cycles and fire before the first record at
// or past them.
//
// Wear events are fills (read or write miss), write hits, and redirected writes. A
// write hit on a blocked way is handled like a write miss: the resident copy is
// invalidated and the block is refilled in an unblocked way. In sets without counters,
// a write miss by an IP the policy flags blocks the way SRRIP would have chosen for the
// rest of the interval and allocates elsewhere.
class Engine
{
public:
  Engine(const CacheConfig& cfg, PolicyKind policy);

  void process_access(const AccessRecord& rec);

  // Fires the end-of-trace boundary and returns the final report. The engine must not
  // be fed further records afterwards.
  MetricsReport finish();

  const CacheConfig& config() const { return cfg_; }
  const CacheArray& cache() const { return cache_; }
  const WearPolicy& policy() const { return *policy_; }
  WearPolicy& policy() { return *policy_; }
  const SampleIndex& samples() const { return samples_; }
  const std::vector<IntervalSnapshot>& intervals() const { return intervals_; }
  const std::vector<std::uint64_t>& wear_map() const { return wear_map_; }
  std::uint64_t records_processed() const { return accesses_; }

private:
  void fire_boundary();
  void wear(std::uint64_t set, std::uint32_t way, InstrPtr ip);
  void handle_read(std::uint64_t set_index, std::uint64_t tag, InstrPtr ip);
  void handle_write(std::uint64_t set_index, std::uint64_t tag, InstrPtr ip);
  std::uint32_t allocate(std::uint64_t set_index, std::uint64_t tag, InstrPtr ip, WayMask blocked);

  CacheConfig cfg_;
  CacheArray cache_;
  std::unique_ptr<WearPolicy> policy_;
  SampleIndex samples_;

  std::uint64_t next_boundary_;
  std::uint64_t last_cycle_ = 0;
  bool finished_ = false;

  std::uint64_t accesses_ = 0;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
  std::uint64_t writes_ = 0;
  std::uint64_t wear_events_ = 0;
  std::uint64_t redirected_writes_ = 0;
  std::uint64_t blocked_hit_conversions_ = 0;
  std::uint64_t fallback_wear_events_ = 0;
  std::uint64_t boundaries_ = 0;

  std::vector<std::uint64_t> wear_map_;
  std::vector<std::uint64_t> interval_counts_; // sampled slot x way
  std::vector<IntervalSnapshot> intervals_;
  std::unordered_map<InstrPtr, IpAccessCount> ip_counts_;
};

MetricsReport run(std::span<const AccessRecord> trace, const CacheConfig& cfg, PolicyKind policy);

// Streams a text trace; malformed lines raise TraceError with the line number.
MetricsReport run(std::istream& trace, const CacheConfig& cfg, PolicyKind policy);

} // namespace wearsim
