#include "wearsim/trace.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/core.h>

namespace wearsim
{

namespace
{
std::string_view next_field(std::string_view& rest)
{
  const auto start = rest.find_first_not_of(" \t\r");
  if (start == std::string_view::npos) {
    rest = {};
    return {};
  }
  rest.remove_prefix(start);
  const auto end = rest.find_first_of(" \t\r");
  auto field = rest.substr(0, end);
  rest.remove_prefix(end == std::string_view::npos ? rest.size() : end);
  return field;
}

bool parse_u64(std::string_view text, int base, std::uint64_t& out)
{
  if (base == 16 && text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X'))
    text.remove_prefix(2);
  if (text.empty())
    return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out, base);
  return ec == std::errc{} && ptr == text.data() + text.size();
}
} // namespace

std::optional<AccessRecord> parse_trace_line(std::string_view line, std::uint64_t line_no)
{
  const auto first = line.find_first_not_of(" \t\r");
  if (first == std::string_view::npos || line[first] == '#')
    return std::nullopt;

  std::string_view rest = line;
  const auto cycle = next_field(rest);
  const auto ip = next_field(rest);
  const auto addr = next_field(rest);
  const auto kind = next_field(rest);
  if (kind.empty() || !next_field(rest).empty())
    throw TraceError(fmt::format("line {}: expected '<cycle> <ip-hex> <addr-hex> <R|W>'", line_no), line_no);

  AccessRecord rec;
  if (!parse_u64(cycle, 10, rec.cycle))
    throw TraceError(fmt::format("line {}: bad cycle '{}'", line_no, cycle), line_no);
  if (!parse_u64(ip, 16, rec.ip))
    throw TraceError(fmt::format("line {}: bad instruction pointer '{}'", line_no, ip), line_no);
  if (!parse_u64(addr, 16, rec.addr))
    throw TraceError(fmt::format("line {}: bad address '{}'", line_no, addr), line_no);
  if (kind == "R" || kind == "r")
    rec.kind = AccessKind::read;
  else if (kind == "W" || kind == "w")
    rec.kind = AccessKind::write;
  else
    throw TraceError(fmt::format("line {}: bad access kind '{}'", line_no, kind), line_no);
  return rec;
}

std::string format_record(const AccessRecord& rec)
{
  return fmt::format("{} {:#x} {:#x} {}", rec.cycle, rec.ip, rec.addr, rec.kind == AccessKind::write ? 'W' : 'R');
}

std::vector<AccessRecord> read_trace(std::istream& in)
{
  std::vector<AccessRecord> records;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto rec = parse_trace_line(line, line_no);
    if (!rec)
      continue;
    if (!records.empty() && rec->cycle < records.back().cycle)
      throw TraceError(fmt::format("line {} (record {}): cycle {} precedes previous cycle {}", line_no, records.size(), rec->cycle, records.back().cycle),
                       records.size());
    records.push_back(*rec);
  }
  if (in.bad())
    throw TraceError(fmt::format("read error after line {}", line_no), line_no);
  return records;
}

std::vector<AccessRecord> read_trace_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error(fmt::format("cannot open trace '{}'", path));
  return read_trace(in);
}

void write_trace(std::ostream& out, const std::vector<AccessRecord>& records)
{
  for (const auto& rec : records)
    out << format_record(rec) << '\n';
}

} // namespace wearsim
