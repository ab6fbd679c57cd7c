#include "wearsim/tracegen.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "wearsim/cache.hpp"

namespace wearsim
{

std::uint64_t SplitMix64::mix(std::uint64_t z)
{
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next()
{
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix(state_);
}

std::uint64_t SplitMix64::next_below(std::uint64_t bound) { return next() % bound; }

std::string_view to_string(WorkloadKind kind)
{
  switch (kind) {
  case WorkloadKind::hot_way:
    return "hot_way";
  case WorkloadKind::hot_set:
    return "hot_set";
  case WorkloadKind::zipf_mixed:
    return "zipf_mixed";
  }
  return "zipf_mixed";
}

WorkloadKind parse_workload_kind(std::string_view name)
{
  if (name == "hot_way")
    return WorkloadKind::hot_way;
  if (name == "hot_set")
    return WorkloadKind::hot_set;
  if (name == "zipf_mixed")
    return WorkloadKind::zipf_mixed;
  throw ConfigError(fmt::format("unknown workload kind '{}' (expected hot_way, hot_set or zipf_mixed)", name));
}

void WorkloadSpec::validate(const CacheConfig& cfg) const
{
  if (num_records < 1)
    throw ConfigError("num_records must be at least 1");
  if (!(write_fraction >= 0.0 && write_fraction <= 1.0))
    throw ConfigError(fmt::format("write_fraction must lie in [0, 1] (got {})", write_fraction));
  if (!(zipf_s > 0.0))
    throw ConfigError(fmt::format("zipf_s must be positive (got {})", zipf_s));
  if (hot_ip_count < 1)
    throw ConfigError("hot_ip_count must be at least 1");
  if (cycle_stride < 1)
    throw ConfigError("cycle_stride must be at least 1");
  if (target_set && *target_set >= cfg.num_sets)
    throw ConfigError(fmt::format("target_set {} out of range (num_sets = {})", *target_set, cfg.num_sets));
  if (hot_window < 1)
    throw ConfigError("hot_window must be at least 1");
}

InstrPtr hot_ip(std::uint32_t index) { return 0x400000 + 0x40ULL * index; }
InstrPtr cold_ip(std::uint32_t index) { return 0x600000 + 0x10ULL * index; }

namespace
{
std::vector<AccessRecord> gen_hot_way(const WorkloadSpec& spec, const CacheConfig& cfg)
{
  SplitMix64 rng(spec.seed);
  const std::uint64_t set = spec.target_set.value_or(0);
  const std::uint64_t pool = 2ULL * cfg.num_ways;
  std::vector<AccessRecord> out;
  out.reserve(spec.num_records);
  for (std::uint64_t i = 0; i < spec.num_records; ++i) {
    const std::uint64_t cycle = (i + 1) * spec.cycle_stride;
    const std::uint64_t window_start = cycle / cfg.interval_cycles;
    const std::uint64_t tag = (window_start + rng.next_below(spec.hot_window)) % pool;
    out.push_back({cycle, hot_ip(0), recompose_address({tag, set}, cfg), AccessKind::write});
  }
  return out;
}

std::vector<AccessRecord> gen_hot_set(const WorkloadSpec& spec, const CacheConfig& cfg)
{
  SplitMix64 root(spec.seed);
  SplitMix64 block_rng = root.split();
  SplitMix64 kind_rng = root.split();
  const std::uint64_t set = spec.target_set.value_or(0);
  const std::uint64_t blocks = spec.hot_block_count == 0 ? std::max<std::uint32_t>(cfg.num_ways / 2, 1) : spec.hot_block_count;
  std::vector<AccessRecord> out;
  out.reserve(spec.num_records);
  for (std::uint64_t i = 0; i < spec.num_records; ++i) {
    const std::uint64_t tag = block_rng.next_below(blocks);
    const auto kind = kind_rng.next_unit() < spec.write_fraction ? AccessKind::write : AccessKind::read;
    out.push_back({(i + 1) * spec.cycle_stride, hot_ip(static_cast<std::uint32_t>(tag % spec.hot_ip_count)), recompose_address({tag, set}, cfg), kind});
  }
  return out;
}

std::vector<AccessRecord> gen_zipf_mixed(const WorkloadSpec& spec, const CacheConfig& cfg)
{
  const std::uint64_t universe = cfg.num_sets * cfg.num_ways * 4;

  std::vector<double> cdf(universe);
  double acc = 0.0;
  for (std::uint64_t r = 0; r < universe; ++r) {
    acc += std::pow(static_cast<double>(r + 1), -spec.zipf_s);
    cdf[r] = acc;
  }
  for (auto& c : cdf)
    c /= acc;

  SplitMix64 root(spec.seed);
  SplitMix64 rank_rng = root.split();
  SplitMix64 ip_rng = root.split();
  SplitMix64 kind_rng = root.split();
  // Odd multiplier and offset make rank -> block a bijection modulo the power-of-two universe.
  const std::uint64_t multiplier = 0x9E3779B97F4A7C15ULL;
  const std::uint64_t offset = root.next();

  std::vector<AccessRecord> out;
  out.reserve(spec.num_records);
  for (std::uint64_t i = 0; i < spec.num_records; ++i) {
    const double u = rank_rng.next_unit();
    const auto rank = static_cast<std::uint64_t>(std::upper_bound(cdf.begin(), cdf.end() - 1, u) - cdf.begin());
    const std::uint64_t block = (rank * multiplier + offset) & (universe - 1);

    InstrPtr ip;
    if (ip_rng.next_unit() < hot_ip_share)
      ip = hot_ip(static_cast<std::uint32_t>(rank % spec.hot_ip_count));
    else
      ip = cold_ip(static_cast<std::uint32_t>(ip_rng.next_below(cold_ip_count)));

    const auto kind = kind_rng.next_unit() < spec.write_fraction ? AccessKind::write : AccessKind::read;
    out.push_back({(i + 1) * spec.cycle_stride, ip, block << cfg.offset_bits(), kind});
  }
  return out;
}
} // namespace

std::vector<AccessRecord> generate(const WorkloadSpec& spec, const CacheConfig& cfg)
{
  cfg.validate();
  spec.validate(cfg);
  switch (spec.kind) {
  case WorkloadKind::hot_way:
    return gen_hot_way(spec, cfg);
  case WorkloadKind::hot_set:
    return gen_hot_set(spec, cfg);
  case WorkloadKind::zipf_mixed:
    return gen_zipf_mixed(spec, cfg);
  }
  return {};
}

} // namespace wearsim
