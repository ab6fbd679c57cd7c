#include "wearsim/metrics.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/core.h>

#include "json.hpp"

namespace wearsim
{

double ipc_proxy(std::uint64_t accesses, std::uint64_t hits, std::uint64_t misses, std::uint64_t last_cycle, const CacheConfig& cfg)
{
  if (accesses == 0)
    return 0.0;
  const std::uint64_t cycles = last_cycle + hits * cfg.hit_latency_cycles + misses * cfg.miss_latency_cycles;
  return static_cast<double>(accesses) / static_cast<double>(std::max<std::uint64_t>(cycles, 1));
}

namespace
{
nlohmann::ordered_json config_json(const CacheConfig& c)
{
  nlohmann::ordered_json j;
  j["num_sets"] = c.num_sets;
  j["num_ways"] = c.num_ways;
  j["block_size_bytes"] = c.block_size_bytes;
  j["threshold"] = c.threshold;
  j["interval_cycles"] = c.interval_cycles;
  j["history_depth"] = c.history_depth;
  j["sample_bits"] = c.sample_bits;
  j["pc_limit"] = c.pc_limit;
  j["hit_latency_cycles"] = c.hit_latency_cycles;
  j["miss_latency_cycles"] = c.miss_latency_cycles;
  j["invert_feedback"] = c.invert_feedback;
  j["recency_weighting"] = std::string(to_string(c.recency_weighting));
  return j;
}
} // namespace

std::string to_json(const MetricsReport& r)
{
  nlohmann::ordered_json j;
  j["policy"] = std::string(to_string(r.policy));
  j["config"] = config_json(r.config);
  j["accesses"] = r.accesses;
  j["hits"] = r.hits;
  j["misses"] = r.misses;
  j["writes"] = r.writes;
  j["wear_events"] = r.wear_events;
  j["redirected_writes"] = r.redirected_writes;
  j["blocked_hit_conversions"] = r.blocked_hit_conversions;
  j["fallback_wear_events"] = r.fallback_wear_events;
  j["last_cycle"] = r.last_cycle;
  j["boundaries"] = r.boundaries;
  j["miss_ratio"] = r.miss_ratio;
  j["ipc_proxy"] = r.ipc_proxy;
  j["global_wear_cov"] = r.global_wear_cov;
  j["mean_interval_variance"] = r.mean_interval_variance;
  j["mean_lifetime_set_variance"] = r.mean_lifetime_set_variance;
  j["sampled_set_count"] = r.sampled_sets.size();
  j["counter_sets"] = r.counter_sets;
  j["sampled_sets"] = r.sampled_sets;

  auto& series = j["intra_set_variance_series"] = nlohmann::ordered_json::array();
  for (const auto& snap : r.intervals) {
    nlohmann::ordered_json row;
    row["interval"] = snap.index;
    row["variance"] = snap.variances;
    row["cumulative_variance"] = snap.cumulative_variances;
    row["block_mask"] = snap.block_masks;
    series.push_back(std::move(row));
  }

  auto& wear = j["wear_map"] = nlohmann::ordered_json::array();
  const std::uint32_t ways = r.config.num_ways;
  for (std::uint64_t set = 0; set < r.config.num_sets && !r.wear_map.empty(); ++set)
    wear.push_back(std::vector<std::uint64_t>(r.wear_map.begin() + set * ways, r.wear_map.begin() + (set + 1) * ways));

  auto& hist = j["ip_access_histogram"] = nlohmann::ordered_json::array();
  for (const auto& entry : r.ip_access_histogram)
    hist.push_back({{"ip", fmt::format("{:#x}", entry.ip)}, {"sampled", entry.sampled}, {"unsampled", entry.unsampled}});

  return j.dump(1) + "\n";
}

void write_variance_csv(std::ostream& out, const MetricsReport& r)
{
  out << "interval,set,variance\n";
  for (const auto& snap : r.intervals)
    for (std::size_t slot = 0; slot < snap.variances.size(); ++slot)
      out << fmt::format("{},{},{}\n", snap.index, r.sampled_sets[slot], snap.variances[slot]);
}

void write_wear_csv(std::ostream& out, const MetricsReport& r)
{
  out << "set,way,wear\n";
  for (std::uint64_t set = 0; set < r.config.num_sets; ++set)
    for (std::uint32_t way = 0; way < r.config.num_ways; ++way)
      out << fmt::format("{},{},{}\n", set, way, r.wear(set, way));
}

} // namespace wearsim
