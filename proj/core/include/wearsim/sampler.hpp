#pragma once

#include <cstdint>
#include <vector>

#include "wearsim/config.hpp"

namespace wearsim
{

// A set is sampled when its top `sample_bits` index bits equal its bottom `sample_bits`
// bits. That selects num_sets / 2^sample_bits sets spread evenly over the index space.
bool is_sampled_set(std::uint64_t set_index, const CacheConfig& cfg);

// Ascending list of sampled set indices.
std::vector<std::uint64_t> sampled_sets(const CacheConfig& cfg);

// Maps set index -> dense slot in sampled_sets(cfg), or -1.
class SampleIndex
{
public:
  explicit SampleIndex(const CacheConfig& cfg);

  int slot(std::uint64_t set_index) const { return slots_[set_index]; }
  bool sampled(std::uint64_t set_index) const { return slots_[set_index] >= 0; }
  const std::vector<std::uint64_t>& sets() const { return sets_; }
  std::size_t size() const { return sets_.size(); }

private:
  std::vector<std::uint64_t> sets_;
  std::vector<int> slots_;
};

} // namespace wearsim
