#include "wearsim/cache.hpp"

#include <algorithm>

#include <fmt/core.h>

namespace wearsim
{

AddressParts decode_address(Address addr, const CacheConfig& cfg)
{
  const std::uint64_t block = addr >> cfg.offset_bits();
  return {block >> cfg.set_bits(), block & (cfg.num_sets - 1)};
}

Address recompose_address(const AddressParts& parts, const CacheConfig& cfg)
{
  const std::uint64_t block = (parts.tag << cfg.set_bits()) | parts.set_index;
  return block << cfg.offset_bits();
}

std::optional<std::uint32_t> lookup(std::span<const LineState> set, std::uint64_t tag)
{
  std::optional<std::uint32_t> found;
  for (std::uint32_t way = 0; way < set.size(); ++way) {
    if (!set[way].valid || set[way].tag != tag)
      continue;
    if (found)
      throw CorruptStateError(fmt::format("tag {:#x} resident in ways {} and {}", tag, *found, way));
    found = way;
  }
  return found;
}

std::uint32_t srrip_victim(std::span<LineState> set, WayMask blocked)
{
  const auto num_ways = static_cast<std::uint32_t>(set.size());
  WayMask candidates{WayMask::all(num_ways).bits() & ~blocked.bits()};
  if (candidates.none())
    candidates = WayMask::all(num_ways);

  for (std::uint32_t way = 0; way < num_ways; ++way)
    if (candidates.test(way) && !set[way].valid)
      return way;

  // At most max_rrpv aging rounds before some candidate reaches max_rrpv.
  for (;;) {
    for (std::uint32_t way = 0; way < num_ways; ++way)
      if (candidates.test(way) && set[way].rrpv >= max_rrpv)
        return way;
    for (std::uint32_t way = 0; way < num_ways; ++way)
      if (candidates.test(way) && set[way].rrpv < max_rrpv)
        ++set[way].rrpv;
  }
}

LineState on_hit_update(LineState line)
{
  line.rrpv = 0;
  return line;
}

LineState fill_line(LineState line, std::uint64_t tag, InstrPtr ip)
{
  line.valid = true;
  line.tag = tag;
  line.rrpv = insert_rrpv;
  line.last_writer_ip = ip;
  return line;
}

WayMask blocked_ways(std::span<const LineState> set)
{
  WayMask mask;
  for (std::uint32_t way = 0; way < set.size(); ++way)
    if (set[way].blocked)
      mask.set(way);
  return mask;
}

CacheArray::CacheArray(const CacheConfig& cfg) : num_sets_(cfg.num_sets), num_ways_(cfg.num_ways), lines_(cfg.num_sets * cfg.num_ways) {}

void CacheArray::apply_mask(std::uint64_t index, WayMask mask)
{
  auto lines = set(index);
  for (std::uint32_t way = 0; way < num_ways_; ++way)
    lines[way].blocked = mask.test(way);
}

bool CacheArray::tags_unique() const
{
  std::vector<std::uint64_t> tags;
  for (std::uint64_t s = 0; s < num_sets_; ++s) {
    tags.clear();
    for (const auto& line : set(s))
      if (line.valid)
        tags.push_back(line.tag);
    std::sort(tags.begin(), tags.end());
    if (std::adjacent_find(tags.begin(), tags.end()) != tags.end())
      return false;
  }
  return true;
}

} // namespace wearsim
