#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wearsim/config.hpp"
#include "wearsim/metrics.hpp"
#include "wearsim/policy.hpp"
#include "wearsim/trace.hpp"
#include "wearsim/tracegen.hpp"

namespace wearsim::cli
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_runtime = 1;
inline constexpr int exit_usage = 2;

// Bad command-line usage; maps to exit code 2.
class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Contents of a --config JSON file: the cache parameters at top level, plus
// "policy", "trace", "out_dir" and an optional "workload" object for inline
// generation. Unknown keys are rejected; missing keys keep their defaults.
struct RunConfig {
  CacheConfig cache;
  PolicyKind policy = PolicyKind::proposed;
  std::string trace;
  std::string out_dir = "out";
  std::optional<WorkloadSpec> workload;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);
WorkloadSpec parse_workload(const std::string& json_text);

// Loads the trace file, or generates the inline workload when no trace is given.
std::vector<AccessRecord> load_records(const RunConfig& cfg);

// Writes every (path, contents) pair through a temporary file and renames only once all
// temporaries were written, so a failure leaves no partial outputs behind.
void write_files_atomically(const std::vector<std::pair<std::string, std::string>>& files);

// Runs fn(0) ... fn(n - 1) on up to `jobs` threads.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

enum class SweepParam { threshold, interval_cycles, pc_limit };
SweepParam parse_sweep_param(const std::string& name);
std::string_view to_string(SweepParam p);

struct GenOptions {
  WorkloadSpec spec;
  CacheConfig cache;
  std::string out; // empty -> standard output
};

int cmd_gen(const GenOptions& opts, std::ostream& out, std::ostream& err);
int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& cfg, const std::vector<PolicyKind>& policies, unsigned jobs, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, SweepParam param, const std::vector<std::uint64_t>& values, unsigned jobs, std::ostream& out, std::ostream& err);

std::string summary_line(const MetricsReport& r);

// Full command-line entry point: parses argv and dispatches.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace wearsim::cli
