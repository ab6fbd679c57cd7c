#include "wearsim/sampler.hpp"

namespace wearsim
{

bool is_sampled_set(std::uint64_t set_index, const CacheConfig& cfg)
{
  const std::uint64_t mask = (1ULL << cfg.sample_bits) - 1;
  const unsigned shift = cfg.set_bits() - cfg.sample_bits;
  return ((set_index >> shift) & mask) == (set_index & mask);
}

std::vector<std::uint64_t> sampled_sets(const CacheConfig& cfg)
{
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 0; s < cfg.num_sets; ++s)
    if (is_sampled_set(s, cfg))
      out.push_back(s);
  return out;
}

SampleIndex::SampleIndex(const CacheConfig& cfg) : sets_(sampled_sets(cfg)), slots_(cfg.num_sets, -1)
{
  for (std::size_t i = 0; i < sets_.size(); ++i)
    slots_[sets_[i]] = static_cast<int>(i);
}

} // namespace wearsim
