#include "cli.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "wearsim/engine.hpp"

namespace wearsim::cli
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{
template <typename T>
T get_as(const json& j, const std::string& key)
{
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(fmt::format("config key '{}' has the wrong type", key));
  }
}

WorkloadSpec workload_from_json(const json& j)
{
  if (!j.is_object())
    throw ConfigError("workload must be a JSON object");
  WorkloadSpec spec;
  for (const auto& [key, value] : j.items()) {
    if (key == "kind")
      spec.kind = parse_workload_kind(get_as<std::string>(value, key));
    else if (key == "num_records")
      spec.num_records = get_as<std::uint64_t>(value, key);
    else if (key == "seed")
      spec.seed = get_as<std::uint64_t>(value, key);
    else if (key == "zipf_s")
      spec.zipf_s = get_as<double>(value, key);
    else if (key == "hot_ip_count")
      spec.hot_ip_count = get_as<std::uint32_t>(value, key);
    else if (key == "write_fraction")
      spec.write_fraction = get_as<double>(value, key);
    else if (key == "target_set")
      spec.target_set = value.is_null() ? std::nullopt : std::optional<std::uint64_t>(get_as<std::uint64_t>(value, key));
    else if (key == "cycle_stride")
      spec.cycle_stride = get_as<std::uint64_t>(value, key);
    else if (key == "hot_block_count")
      spec.hot_block_count = get_as<std::uint32_t>(value, key);
    else if (key == "hot_window")
      spec.hot_window = get_as<std::uint32_t>(value, key);
    else
      throw ConfigError(fmt::format("unknown workload key '{}'", key));
  }
  return spec;
}

json parse_json(const std::string& text)
{
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("malformed JSON: {}", e.what()));
  }
}

std::string slurp(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string report_csv_header() { return "accesses,miss_ratio,ipc_proxy,mean_interval_variance,mean_lifetime_set_variance,global_wear_cov,redirected_writes"; }

std::string report_csv_fields(const MetricsReport& r)
{
  return fmt::format("{},{},{},{},{},{},{}", r.accesses, r.miss_ratio, r.ipc_proxy, r.mean_interval_variance, r.mean_lifetime_set_variance, r.global_wear_cov,
                     r.redirected_writes);
}

std::string path_in(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }
} // namespace

WorkloadSpec parse_workload(const std::string& json_text) { return workload_from_json(parse_json(json_text)); }

RunConfig parse_run_config(const std::string& json_text)
{
  const json j = parse_json(json_text);
  if (!j.is_object())
    throw ConfigError("config must be a JSON object");

  RunConfig cfg;
  auto& c = cfg.cache;
  for (const auto& [key, value] : j.items()) {
    if (key == "num_sets")
      c.num_sets = get_as<std::uint64_t>(value, key);
    else if (key == "num_ways")
      c.num_ways = get_as<std::uint32_t>(value, key);
    else if (key == "block_size_bytes")
      c.block_size_bytes = get_as<std::uint64_t>(value, key);
    else if (key == "threshold")
      c.threshold = get_as<std::uint32_t>(value, key);
    else if (key == "interval_cycles")
      c.interval_cycles = get_as<std::uint64_t>(value, key);
    else if (key == "history_depth")
      c.history_depth = get_as<std::uint32_t>(value, key);
    else if (key == "sample_bits")
      c.sample_bits = get_as<std::uint32_t>(value, key);
    else if (key == "pc_limit")
      c.pc_limit = get_as<std::int32_t>(value, key);
    else if (key == "hit_latency_cycles")
      c.hit_latency_cycles = get_as<std::uint64_t>(value, key);
    else if (key == "miss_latency_cycles")
      c.miss_latency_cycles = get_as<std::uint64_t>(value, key);
    else if (key == "invert_feedback")
      c.invert_feedback = get_as<bool>(value, key);
    else if (key == "recency_weighting")
      c.recency_weighting = parse_recency_weighting(get_as<std::string>(value, key));
    else if (key == "policy")
      cfg.policy = parse_policy_kind(get_as<std::string>(value, key));
    else if (key == "trace")
      cfg.trace = get_as<std::string>(value, key);
    else if (key == "out_dir")
      cfg.out_dir = get_as<std::string>(value, key);
    else if (key == "workload")
      cfg.workload = workload_from_json(value);
    else
      throw ConfigError(fmt::format("unknown config key '{}'", key));
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(slurp(path)); }

std::vector<AccessRecord> load_records(const RunConfig& cfg)
{
  if (!cfg.trace.empty())
    return read_trace_file(cfg.trace);
  if (cfg.workload)
    return generate(*cfg.workload, cfg.cache);
  throw UsageError("no trace given: pass --trace or a config with \"trace\" or \"workload\"");
}

void write_files_atomically(const std::vector<std::pair<std::string, std::string>>& files)
{
  std::vector<std::string> temps;
  try {
    for (const auto& [path, contents] : files) {
      const auto parent = fs::path(path).parent_path();
      if (!parent.empty())
        fs::create_directories(parent);
      auto tmp = path + ".tmp";
      temps.push_back(tmp);
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << contents;
      out.close();
      if (!out)
        throw std::runtime_error(fmt::format("failed writing '{}'", tmp));
    }
    for (std::size_t i = 0; i < files.size(); ++i)
      fs::rename(temps[i], files[i].first);
  } catch (...) {
    std::error_code ec;
    for (const auto& tmp : temps)
      fs::remove(tmp, ec);
    throw;
  }
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn)
{
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for (unsigned t = 0; t < jobs; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure)
            failure = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers)
    w.join();
  if (failure)
    std::rethrow_exception(failure);
}

SweepParam parse_sweep_param(const std::string& name)
{
  if (name == "threshold")
    return SweepParam::threshold;
  if (name == "interval_cycles" || name == "interval")
    return SweepParam::interval_cycles;
  if (name == "pc_limit")
    return SweepParam::pc_limit;
  throw UsageError(fmt::format("unknown sweep parameter '{}' (expected threshold, interval_cycles or pc_limit)", name));
}

std::string_view to_string(SweepParam p)
{
  switch (p) {
  case SweepParam::threshold:
    return "threshold";
  case SweepParam::interval_cycles:
    return "interval_cycles";
  case SweepParam::pc_limit:
    return "pc_limit";
  }
  return "threshold";
}

std::string summary_line(const MetricsReport& r)
{
  return fmt::format("policy={} accesses={} miss_ratio={:.6f} ipc_proxy={:.6f} global_wear_cov={:.6f}", to_string(r.policy), r.accesses, r.miss_ratio, r.ipc_proxy,
                     r.global_wear_cov);
}

int cmd_gen(const GenOptions& opts, std::ostream& out, std::ostream& err)
{
  const auto records = generate(opts.spec, opts.cache);
  std::ostringstream text;
  write_trace(text, records);
  if (opts.out.empty()) {
    out << text.str();
    err << fmt::format("generated {} records\n", records.size());
  } else {
    write_files_atomically({{opts.out, text.str()}});
    out << fmt::format("wrote {} records to {}\n", records.size(), opts.out);
  }
  return exit_ok;
}

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream&)
{
  cfg.cache.validate();
  const auto records = load_records(cfg);
  const auto report = run(records, cfg.cache, cfg.policy);

  std::ostringstream variance;
  std::ostringstream wear;
  write_variance_csv(variance, report);
  write_wear_csv(wear, report);
  write_files_atomically({
      {path_in(cfg.out_dir, "metrics.json"), to_json(report)},
      {path_in(cfg.out_dir, "variance.csv"), variance.str()},
      {path_in(cfg.out_dir, "wear.csv"), wear.str()},
  });
  out << summary_line(report) << '\n';
  return exit_ok;
}

int cmd_compare(const RunConfig& cfg, const std::vector<PolicyKind>& policies, unsigned jobs, std::ostream& out, std::ostream&)
{
  if (policies.empty())
    throw UsageError("compare needs at least one policy");
  cfg.cache.validate();
  const auto records = load_records(cfg);

  std::vector<MetricsReport> reports(policies.size());
  parallel_for(policies.size(), jobs, [&](std::size_t i) { reports[i] = run(records, cfg.cache, policies[i]); });

  std::string csv = "policy," + report_csv_header() + "\n";
  out << fmt::format("{:<10} {:>10} {:>10} {:>10} {:>14} {:>14} {:>10} {:>10}\n", "policy", "accesses", "miss_ratio", "ipc_proxy", "interval_var", "lifetime_var",
                     "wear_cov", "redirects");
  for (const auto& r : reports) {
    csv += fmt::format("{},{}\n", to_string(r.policy), report_csv_fields(r));
    out << fmt::format("{:<10} {:>10} {:>10.6f} {:>10.6f} {:>14.4f} {:>14.4f} {:>10.5f} {:>10}\n", to_string(r.policy), r.accesses, r.miss_ratio, r.ipc_proxy,
                       r.mean_interval_variance, r.mean_lifetime_set_variance, r.global_wear_cov, r.redirected_writes);
  }
  write_files_atomically({{path_in(cfg.out_dir, "compare.csv"), csv}});
  return exit_ok;
}

int cmd_sweep(const RunConfig& cfg, SweepParam param, const std::vector<std::uint64_t>& values, unsigned jobs, std::ostream& out, std::ostream&)
{
  if (values.empty())
    throw UsageError("sweep needs at least one value");

  std::vector<CacheConfig> configs;
  for (auto v : values) {
    CacheConfig c = cfg.cache;
    switch (param) {
    case SweepParam::threshold:
      c.threshold = static_cast<std::uint32_t>(v);
      break;
    case SweepParam::interval_cycles:
      c.interval_cycles = v;
      break;
    case SweepParam::pc_limit:
      c.pc_limit = static_cast<std::int32_t>(v);
      break;
    }
    c.validate();
    configs.push_back(c);
  }
  const auto records = load_records(cfg);

  std::vector<MetricsReport> reports(configs.size());
  parallel_for(configs.size(), jobs, [&](std::size_t i) { reports[i] = run(records, configs[i], cfg.policy); });

  std::string csv = fmt::format("{},policy,{}\n", to_string(param), report_csv_header());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    csv += fmt::format("{},{},{}\n", values[i], to_string(reports[i].policy), report_csv_fields(reports[i]));
    out << fmt::format("{}={} {}\n", to_string(param), values[i], summary_line(reports[i]));
  }
  write_files_atomically({{path_in(cfg.out_dir, "sweep.csv"), csv}});
  return exit_ok;
}

namespace
{
struct CommonFlags {
  std::string config;
  std::string policy;
  std::string trace;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> threshold;
  std::optional<std::uint64_t> interval;
  unsigned jobs = 1;
};

void add_common_flags(CLI::App& cmd, CommonFlags& f, bool with_policy)
{
  cmd.add_option("--config", f.config, "JSON run configuration");
  if (with_policy)
    cmd.add_option("--policy", f.policy, "none | threshold | proposed")->check(CLI::IsMember({"none", "threshold", "proposed"}));
  cmd.add_option("--trace", f.trace, "Trace file");
  cmd.add_option("--out-dir", f.out_dir, "Output directory");
  cmd.add_option("--seed", f.seed, "Seed for inline workload generation");
  cmd.add_option("--threshold", f.threshold, "Blocking threshold");
  cmd.add_option("--interval", f.interval, "Interval length in cycles");
  cmd.add_option("--jobs", f.jobs, "Parallel simulations")->check(CLI::PositiveNumber);
}

RunConfig resolve(const CommonFlags& f)
{
  RunConfig cfg = f.config.empty() ? RunConfig{} : load_run_config(f.config);
  if (!f.policy.empty())
    cfg.policy = parse_policy_kind(f.policy);
  if (!f.trace.empty())
    cfg.trace = f.trace;
  if (!f.out_dir.empty())
    cfg.out_dir = f.out_dir;
  if (f.seed) {
    if (!cfg.workload)
      throw UsageError("--seed needs an inline workload in the config");
    cfg.workload->seed = *f.seed;
  }
  if (f.threshold)
    cfg.cache.threshold = *f.threshold;
  if (f.interval)
    cfg.cache.interval_cycles = *f.interval;
  return cfg;
}

template <typename T>
std::vector<T> split_list(const std::string& text, T (*parse)(const std::string&))
{
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty())
      out.push_back(parse(item));
  return out;
}

std::uint64_t parse_u64_arg(const std::string& s)
{
  std::size_t pos = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty() || s[0] == '-')
    throw UsageError(fmt::format("bad value '{}'", s));
  return v;
}

PolicyKind parse_policy_arg(const std::string& s)
{
  try {
    return parse_policy_kind(s);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}
} // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Trace-driven NVM last-level cache wear-leveling simulator"};
  app.require_subcommand(1);

  GenOptions gen;
  std::string gen_kind;
  std::string gen_config;
  std::optional<std::uint64_t> gen_target_set;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic trace");
  gen_cmd->add_option("--kind", gen_kind, "hot_way | hot_set | zipf_mixed")->required()->check(CLI::IsMember({"hot_way", "hot_set", "zipf_mixed"}));
  gen_cmd->add_option("--records", gen.spec.num_records, "Number of records");
  gen_cmd->add_option("--seed", gen.spec.seed, "Generator seed");
  gen_cmd->add_option("--out", gen.out, "Output trace file (default: standard output)");
  gen_cmd->add_option("--zipf-s", gen.spec.zipf_s, "Zipf exponent (zipf_mixed)");
  gen_cmd->add_option("--hot-ips", gen.spec.hot_ip_count, "Number of hot instruction pointers");
  gen_cmd->add_option("--write-fraction", gen.spec.write_fraction, "Fraction of writes");
  gen_cmd->add_option("--target-set", gen_target_set, "Target set (hot_way, hot_set)");
  gen_cmd->add_option("--stride", gen.spec.cycle_stride, "Cycles between records");
  gen_cmd->add_option("--hot-blocks", gen.spec.hot_block_count, "Blocks written by hot_set (0 = ways / 2)");
  gen_cmd->add_option("--hot-window", gen.spec.hot_window, "Window size for hot_way");
  gen_cmd->add_option("--config", gen_config, "JSON config supplying cache geometry and interval");

  CommonFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Simulate one policy on a trace");
  add_common_flags(*run_cmd, run_flags, true);

  CommonFlags cmp_flags;
  std::string cmp_policies = "none,threshold,proposed";
  auto* cmp_cmd = app.add_subcommand("compare", "Run several policies on the same trace");
  add_common_flags(*cmp_cmd, cmp_flags, false);
  cmp_cmd->add_option("--policies", cmp_policies, "Comma-separated policy list");

  CommonFlags sweep_flags;
  std::string sweep_param;
  std::string sweep_values;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one parameter");
  add_common_flags(*sweep_cmd, sweep_flags, true);
  sweep_cmd->add_option("--param", sweep_param, "threshold | interval_cycles | pc_limit")->required();
  sweep_cmd->add_option("--values", sweep_values, "Comma-separated values")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    if (gen_cmd->parsed()) {
      gen.spec.kind = parse_workload_kind(gen_kind);
      gen.spec.target_set = gen_target_set;
      if (!gen_config.empty())
        gen.cache = load_run_config(gen_config).cache;
      return cmd_gen(gen, out, err);
    }
    if (run_cmd->parsed())
      return cmd_run(resolve(run_flags), out, err);
    if (cmp_cmd->parsed())
      return cmd_compare(resolve(cmp_flags), split_list<PolicyKind>(cmp_policies, parse_policy_arg), cmp_flags.jobs, out, err);
    if (sweep_cmd->parsed()) {
      const auto param = parse_sweep_param(sweep_param);
      return cmd_sweep(resolve(sweep_flags), param, split_list<std::uint64_t>(sweep_values, parse_u64_arg), sweep_flags.jobs, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_runtime;
  }
  return exit_usage;
}

} // namespace wearsim::cli
