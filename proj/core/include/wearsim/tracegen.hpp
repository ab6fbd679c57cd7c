#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "wearsim/config.hpp"
#include "wearsim/trace.hpp"

namespace wearsim
{

// SplitMix64 (Steele, Lea & Flood). Output i of a stream seeded with s is
// mix(s + (i + 1) * 0x9E3779B97F4A7C15), so streams are counter-addressable and
// split() derives an independent child stream.
class SplitMix64
{
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  SplitMix64 split() { return SplitMix64(next()); }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // next() mod bound; bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound);

  static std::uint64_t mix(std::uint64_t z);

private:
  std::uint64_t state_;
};

enum class WorkloadKind { hot_way, hot_set, zipf_mixed };

std::string_view to_string(WorkloadKind kind);
WorkloadKind parse_workload_kind(std::string_view name);

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::zipf_mixed;
  std::uint64_t num_records = 100000;
  std::uint64_t seed = 1;
  double zipf_s = 1.0;
  std::uint32_t hot_ip_count = 8;
  double write_fraction = 0.5;
  std::optional<std::uint64_t> target_set;
  std::uint64_t cycle_stride = 1;

  // hot_set: distinct blocks written in the target set (0 = num_ways / 2).
  std::uint32_t hot_block_count = 0;
  // hot_way: blocks in the rotating window; the window slides by one block every
  // interval_cycles cycles over a pool of 2 * num_ways blocks.
  std::uint32_t hot_window = 2;

  // Throws ConfigError.
  void validate(const CacheConfig& cfg) const;

  bool operator==(const WorkloadSpec&) const = default;
};

// Share of zipf_mixed accesses issued by one of the hot IPs.
inline constexpr double hot_ip_share = 0.85;
inline constexpr std::uint32_t cold_ip_count = 256;

InstrPtr hot_ip(std::uint32_t index);
InstrPtr cold_ip(std::uint32_t index);

// hot_way: every record is a write by a single IP to a small sliding window of blocks in
//   target_set (default 0).
// hot_set: uniform accesses over hot_block_count blocks of target_set; each block has a
//   fixed owner among the hot IPs.
// zipf_mixed: block ranks drawn Zipf(zipf_s) over num_sets * num_ways * 4 blocks, scattered
//   over all sets by an odd-multiplier bijection. 85% of accesses come from the hot IP
//   that owns the rank, the rest from 256 cold IPs.
// Cycle stamps are stride, 2 * stride, ... Output is a pure function of (spec, cfg).
std::vector<AccessRecord> generate(const WorkloadSpec& spec, const CacheConfig& cfg);

} // namespace wearsim
