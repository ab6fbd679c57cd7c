#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wearsim/cache.hpp"

namespace wearsim
{

enum class AccessKind : std::uint8_t { read, write };

struct AccessRecord {
  std::uint64_t cycle = 0;
  InstrPtr ip = 0;
  Address addr = 0;
  AccessKind kind = AccessKind::read;

  bool operator==(const AccessRecord&) const = default;
};

// Malformed or out-of-order trace input. `position` is the 1-based line number for
// parse errors and the 0-based record index for ordering errors.
class TraceError : public std::runtime_error
{
public:
  TraceError(const std::string& what, std::uint64_t position) : std::runtime_error(what), position_(position) {}
  std::uint64_t position() const { return position_; }

private:
  std::uint64_t position_;
};

// Text format, one record per line: "<cycle-decimal> <ip-hex> <addr-hex> <R|W>".
// Blank lines and lines starting with '#' yield nullopt.
std::optional<AccessRecord> parse_trace_line(std::string_view line, std::uint64_t line_no);

std::string format_record(const AccessRecord& rec);

// Reads a whole trace. Throws TraceError on malformed lines or decreasing cycles.
std::vector<AccessRecord> read_trace(std::istream& in);
std::vector<AccessRecord> read_trace_file(const std::string& path);

void write_trace(std::ostream& out, const std::vector<AccessRecord>& records);

} // namespace wearsim
