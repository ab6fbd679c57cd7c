#include "wearsim/engine.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <numeric>
#include <string>

#include <fmt/core.h>

#include "wearsim/stats.hpp"

namespace wearsim
{

namespace
{
const CacheConfig& validated(const CacheConfig& cfg)
{
  cfg.validate();
  return cfg;
}
} // namespace

Engine::Engine(const CacheConfig& cfg, PolicyKind policy)
    : cfg_(validated(cfg)), cache_(cfg_), policy_(make_policy(policy, cfg_)), samples_(cfg_), next_boundary_(cfg_.interval_cycles),
      wear_map_(cfg_.num_sets * cfg_.num_ways, 0), interval_counts_(samples_.size() * cfg_.num_ways, 0)
{
}

void Engine::process_access(const AccessRecord& rec)
{
  if (finished_)
    throw std::logic_error("engine already finished");
  if (accesses_ > 0 && rec.cycle < last_cycle_)
    throw TraceError(fmt::format("record {}: cycle {} precedes previous cycle {}", accesses_, rec.cycle, last_cycle_), accesses_);

  while (rec.cycle >= next_boundary_) {
    fire_boundary();
    next_boundary_ += cfg_.interval_cycles;
  }

  last_cycle_ = rec.cycle;
  ++accesses_;

  const auto parts = decode_address(rec.addr, cfg_);
  auto& ip_count = ip_counts_[rec.ip];
  ip_count.ip = rec.ip;
  if (samples_.sampled(parts.set_index))
    ++ip_count.sampled;
  else
    ++ip_count.unsampled;

  if (rec.kind == AccessKind::write) {
    ++writes_;
    handle_write(parts.set_index, parts.tag, rec.ip);
  } else {
    handle_read(parts.set_index, parts.tag, rec.ip);
  }
}

void Engine::handle_read(std::uint64_t set_index, std::uint64_t tag, InstrPtr ip)
{
  auto lines = cache_.set(set_index);
  if (auto way = lookup(lines, tag)) {
    ++hits_;
    lines[*way] = on_hit_update(lines[*way]);
    return;
  }
  ++misses_;
  allocate(set_index, tag, ip, blocked_ways(lines));
}

void Engine::handle_write(std::uint64_t set_index, std::uint64_t tag, InstrPtr ip)
{
  auto lines = cache_.set(set_index);
  if (auto way = lookup(lines, tag)) {
    ++hits_;
    if (!lines[*way].blocked) {
      lines[*way] = on_hit_update(lines[*way]);
      wear(set_index, *way, ip);
      return;
    }
    ++blocked_hit_conversions_;
    ++redirected_writes_;
    lines[*way].valid = false;
    allocate(set_index, tag, ip, blocked_ways(lines));
    return;
  }

  ++misses_;
  WayMask blocked = blocked_ways(lines);
  if (policy_->blocks_write(set_index, ip)) {
    // Probe on a copy so the default choice does not age the real set.
    std::array<LineState, 64> probe{};
    std::copy(lines.begin(), lines.end(), probe.begin());
    const auto target = srrip_victim(std::span<LineState>(probe.data(), lines.size()), blocked);
    lines[target].blocked = true;
    blocked.set(target);
    ++redirected_writes_;
  }
  allocate(set_index, tag, ip, blocked);
}

std::uint32_t Engine::allocate(std::uint64_t set_index, std::uint64_t tag, InstrPtr ip, WayMask blocked)
{
  auto lines = cache_.set(set_index);
  const auto victim = srrip_victim(lines, blocked);
  lines[victim] = fill_line(lines[victim], tag, ip);
  wear(set_index, victim, ip);
  return victim;
}

void Engine::wear(std::uint64_t set, std::uint32_t way, InstrPtr ip)
{
  auto& line = cache_.set(set)[way];
  line.last_writer_ip = ip;
  if (line.blocked)
    ++fallback_wear_events_;
  ++wear_events_;
  ++wear_map_[set * cfg_.num_ways + way];
  policy_->record_wear_event(set, way, ip);
  if (const int slot = samples_.slot(set); slot >= 0)
    ++interval_counts_[static_cast<std::size_t>(slot) * cfg_.num_ways + way];
}

void Engine::fire_boundary()
{
  const std::size_t ways = cfg_.num_ways;
  IntervalSnapshot snap;
  snap.index = boundaries_;
  snap.write_counts = interval_counts_;
  snap.variances.reserve(samples_.size());
  snap.cumulative_variances.reserve(samples_.size());
  snap.block_masks.reserve(samples_.size());
  for (std::size_t slot = 0; slot < samples_.size(); ++slot) {
    std::span<const std::uint64_t> row(interval_counts_.data() + slot * ways, ways);
    std::span<const std::uint64_t> lifetime(wear_map_.data() + samples_.sets()[slot] * ways, ways);
    snap.variances.push_back(population_variance(row));
    snap.cumulative_variances.push_back(population_variance(lifetime));
    snap.block_masks.push_back(blocked_ways(cache_.set(samples_.sets()[slot])).bits());
  }
  intervals_.push_back(std::move(snap));

  policy_->on_interval_boundary();
  for (std::uint64_t set = 0; set < cfg_.num_sets; ++set)
    cache_.apply_mask(set, policy_->block_mask(set));

  std::fill(interval_counts_.begin(), interval_counts_.end(), 0);
  ++boundaries_;
}

MetricsReport Engine::finish()
{
  if (finished_)
    throw std::logic_error("engine already finished");
  fire_boundary();
  finished_ = true;

  MetricsReport r;
  r.policy = policy_->kind();
  r.config = cfg_;
  r.accesses = accesses_;
  r.hits = hits_;
  r.misses = misses_;
  r.writes = writes_;
  r.wear_events = wear_events_;
  r.redirected_writes = redirected_writes_;
  r.blocked_hit_conversions = blocked_hit_conversions_;
  r.fallback_wear_events = fallback_wear_events_;
  r.last_cycle = last_cycle_;
  r.boundaries = boundaries_;
  r.counter_sets = policy_->counter_sets();
  r.miss_ratio = accesses_ == 0 ? 0.0 : static_cast<double>(misses_) / static_cast<double>(accesses_);
  r.ipc_proxy = ipc_proxy(accesses_, hits_, misses_, last_cycle_, cfg_);
  r.global_wear_cov = coefficient_of_variation(wear_map_);

  r.sampled_sets = samples_.sets();
  r.wear_map = wear_map_;
  r.intervals = intervals_;

  double interval_sum = 0.0;
  std::size_t interval_n = 0;
  for (const auto& snap : intervals_) {
    interval_sum = std::accumulate(snap.variances.begin(), snap.variances.end(), interval_sum);
    interval_n += snap.variances.size();
  }
  r.mean_interval_variance = interval_n == 0 ? 0.0 : interval_sum / static_cast<double>(interval_n);

  double lifetime_sum = 0.0;
  for (auto set : samples_.sets())
    lifetime_sum += population_variance(std::span<const std::uint64_t>(wear_map_.data() + set * cfg_.num_ways, cfg_.num_ways));
  r.mean_lifetime_set_variance = samples_.size() == 0 ? 0.0 : lifetime_sum / static_cast<double>(samples_.size());

  r.ip_access_histogram.reserve(ip_counts_.size());
  for (const auto& [ip, count] : ip_counts_)
    r.ip_access_histogram.push_back(count);
  std::sort(r.ip_access_histogram.begin(), r.ip_access_histogram.end(), [](const auto& a, const auto& b) { return a.ip < b.ip; });
  return r;
}

MetricsReport run(std::span<const AccessRecord> trace, const CacheConfig& cfg, PolicyKind policy)
{
  Engine engine(cfg, policy);
  for (const auto& rec : trace)
    engine.process_access(rec);
  return engine.finish();
}

MetricsReport run(std::istream& trace, const CacheConfig& cfg, PolicyKind policy)
{
  Engine engine(cfg, policy);
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(trace, line)) {
    ++line_no;
    auto rec = parse_trace_line(line, line_no);
    if (!rec)
      continue;
    try {
      engine.process_access(*rec);
    } catch (const TraceError& e) {
      throw TraceError(fmt::format("line {}: {}", line_no, e.what()), line_no);
    }
  }
  return engine.finish();
}

} // namespace wearsim
