#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wearsim
{

class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

enum class RecencyWeighting { linear, uniform };

std::string_view to_string(RecencyWeighting w);
RecencyWeighting parse_recency_weighting(std::string_view name);

// Defaults follow the LLC parameters used for the evaluation: 2048 sets x 16 ways,
// threshold 29, k = 8 history slots, 32 sampled sets (6 sample bits).
struct CacheConfig {
  std::uint64_t num_sets = 2048;
  std::uint32_t num_ways = 16;
  std::uint64_t block_size_bytes = 64;
  std::uint32_t threshold = 29;
  std::uint64_t interval_cycles = 10000;
  std::uint32_t history_depth = 8;
  std::uint32_t sample_bits = 6;
  std::int32_t pc_limit = 16;
  std::uint64_t hit_latency_cycles = 20;
  std::uint64_t miss_latency_cycles = 200;

  // Flips the feedback comparator: when set, a variance at or below the weighted
  // history mean counts as a negative impact.
  bool invert_feedback = false;
  RecencyWeighting recency_weighting = RecencyWeighting::linear;

  // Throws ConfigError naming the first violated constraint.
  void validate() const;

  unsigned set_bits() const;
  unsigned offset_bits() const;

  bool operator==(const CacheConfig&) const = default;
};

constexpr bool is_pow2(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

constexpr unsigned log2_exact(std::uint64_t v)
{
  unsigned n = 0;
  while (v > 1) {
    v >>= 1;
    ++n;
  }
  return n;
}

} // namespace wearsim
