#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "wearsim/config.hpp"

namespace wearsim
{

using Address = std::uint64_t;
using InstrPtr = std::uint64_t;

// Set of ways, bit w = way w. Associativity is capped at 64 by CacheConfig::validate().
class WayMask
{
public:
  constexpr WayMask() = default;
  constexpr explicit WayMask(std::uint64_t bits) : bits_(bits) {}

  static constexpr WayMask all(std::uint32_t num_ways) { return WayMask{num_ways >= 64 ? ~0ULL : ((1ULL << num_ways) - 1)}; }

  constexpr bool test(std::uint32_t way) const { return (bits_ >> way) & 1ULL; }
  constexpr void set(std::uint32_t way) { bits_ |= (1ULL << way); }
  constexpr void reset(std::uint32_t way) { bits_ &= ~(1ULL << way); }
  constexpr bool none() const { return bits_ == 0; }
  constexpr int count() const { return std::popcount(bits_); }
  constexpr std::uint64_t bits() const { return bits_; }

  constexpr bool operator==(const WayMask&) const = default;

private:
  std::uint64_t bits_ = 0;
};

inline constexpr std::uint8_t max_rrpv = 3;
inline constexpr std::uint8_t insert_rrpv = 2;

struct LineState {
  bool valid = false;
  std::uint64_t tag = 0;
  std::uint8_t rrpv = max_rrpv;
  InstrPtr last_writer_ip = 0;
  bool blocked = false;
};

struct AddressParts {
  std::uint64_t tag = 0;
  std::uint64_t set_index = 0;

  bool operator==(const AddressParts&) const = default;
};

class CorruptStateError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

AddressParts decode_address(Address addr, const CacheConfig& cfg);

// Block-aligned address for (tag, set); decode_address(recompose_address(p)) == p.
Address recompose_address(const AddressParts& parts, const CacheConfig& cfg);

// Throws CorruptStateError if two valid ways hold the same tag.
std::optional<std::uint32_t> lookup(std::span<const LineState> set, std::uint64_t tag);

// SRRIP victim selection restricted to ways outside `blocked`. Falls back to all ways
// when every way is blocked. Only candidate ways are aged.
std::uint32_t srrip_victim(std::span<LineState> set, WayMask blocked);

LineState on_hit_update(LineState line);
LineState fill_line(LineState line, std::uint64_t tag, InstrPtr ip);

WayMask blocked_ways(std::span<const LineState> set);

// Flat sets x ways array of lines.
class CacheArray
{
public:
  explicit CacheArray(const CacheConfig& cfg);

  std::span<LineState> set(std::uint64_t index) { return {lines_.data() + index * num_ways_, num_ways_}; }
  std::span<const LineState> set(std::uint64_t index) const { return {lines_.data() + index * num_ways_, num_ways_}; }

  std::uint64_t num_sets() const { return num_sets_; }
  std::uint32_t num_ways() const { return num_ways_; }

  // Applies `mask` to the per-line blocked flags of one set.
  void apply_mask(std::uint64_t index, WayMask mask);

  // True iff no set holds two valid lines with equal tags.
  bool tags_unique() const;

private:
  std::uint64_t num_sets_;
  std::uint32_t num_ways_;
  std::vector<LineState> lines_;
};

} // namespace wearsim
