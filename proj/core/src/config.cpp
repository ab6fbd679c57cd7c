#include "wearsim/config.hpp"

#include <fmt/core.h>

namespace wearsim
{

std::string_view to_string(RecencyWeighting w)
{
  switch (w) {
  case RecencyWeighting::linear:
    return "linear";
  case RecencyWeighting::uniform:
    return "uniform";
  }
  return "linear";
}

RecencyWeighting parse_recency_weighting(std::string_view name)
{
  if (name == "linear")
    return RecencyWeighting::linear;
  if (name == "uniform")
    return RecencyWeighting::uniform;
  throw ConfigError(fmt::format("unknown recency weighting '{}'", name));
}

unsigned CacheConfig::set_bits() const { return log2_exact(num_sets); }
unsigned CacheConfig::offset_bits() const { return log2_exact(block_size_bytes); }

void CacheConfig::validate() const
{
  if (!is_pow2(num_sets))
    throw ConfigError(fmt::format("num_sets must be a power of two (got {})", num_sets));
  if (!is_pow2(num_ways))
    throw ConfigError(fmt::format("num_ways must be a power of two (got {})", num_ways));
  if (num_ways > 64)
    throw ConfigError(fmt::format("num_ways must be at most 64 (got {})", num_ways));
  if (!is_pow2(block_size_bytes))
    throw ConfigError(fmt::format("block_size_bytes must be a power of two (got {})", block_size_bytes));
  if (sample_bits > set_bits())
    throw ConfigError(fmt::format("num_sets ({}) must be at least 2^sample_bits (sample_bits = {})", num_sets, sample_bits));
  if (threshold < 1)
    throw ConfigError("threshold must be at least 1");
  if (interval_cycles < 1)
    throw ConfigError("interval_cycles must be at least 1");
  if (history_depth < 1)
    throw ConfigError("history_depth must be at least 1");
  if (pc_limit < 1)
    throw ConfigError("pc_limit must be at least 1");
  if (miss_latency_cycles <= hit_latency_cycles)
    throw ConfigError(fmt::format("miss_latency_cycles ({}) must exceed hit_latency_cycles ({})", miss_latency_cycles, hit_latency_cycles));
}

} // namespace wearsim
