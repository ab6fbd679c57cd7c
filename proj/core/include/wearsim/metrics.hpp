#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wearsim/cache.hpp"
#include "wearsim/config.hpp"
#include "wearsim/policy.hpp"

namespace wearsim
{

// One completed interval. Entries are indexed by sampled-set slot.
struct IntervalSnapshot {
  std::uint64_t index = 0;
  std::vector<std::uint64_t> write_counts; // slot-major, num_ways per slot
  std::vector<double> variances;            // this interval's per-way counts
  std::vector<double> cumulative_variances; // lifetime wear up to the boundary
  std::vector<std::uint64_t> block_masks; // mask in effect during the interval

  bool operator==(const IntervalSnapshot&) const = default;
};

struct IpAccessCount {
  InstrPtr ip = 0;
  std::uint64_t sampled = 0;
  std::uint64_t unsampled = 0;

  bool operator==(const IpAccessCount&) const = default;
};

struct MetricsReport {
  PolicyKind policy = PolicyKind::none;
  CacheConfig config;

  std::uint64_t accesses = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t writes = 0;
  std::uint64_t wear_events = 0;
  std::uint64_t redirected_writes = 0;
  std::uint64_t blocked_hit_conversions = 0;
  std::uint64_t fallback_wear_events = 0;
  std::uint64_t last_cycle = 0;
  std::uint64_t boundaries = 0;
  std::uint64_t counter_sets = 0;

  double miss_ratio = 0.0;
  double ipc_proxy = 0.0;
  double global_wear_cov = 0.0;
  double mean_interval_variance = 0.0;
  double mean_lifetime_set_variance = 0.0;

  std::vector<std::uint64_t> sampled_sets;
  std::vector<std::uint64_t> wear_map; // set-major, num_ways per set
  std::vector<IntervalSnapshot> intervals;
  std::vector<IpAccessCount> ip_access_histogram; // ascending ip

  std::uint64_t wear(std::uint64_t set, std::uint32_t way) const { return wear_map[set * config.num_ways + way]; }

  bool operator==(const MetricsReport&) const = default;
};

// accesses / (last_cycle + hits * hit_latency + misses * miss_latency), denominator >= 1.
double ipc_proxy(std::uint64_t accesses, std::uint64_t hits, std::uint64_t misses, std::uint64_t last_cycle, const CacheConfig& cfg);

std::string to_json(const MetricsReport& report);
void write_variance_csv(std::ostream& out, const MetricsReport& report);
void write_wear_csv(std::ostream& out, const MetricsReport& report);

} // namespace wearsim
