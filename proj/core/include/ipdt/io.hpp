#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "ipdt/bench.hpp"
#include "ipdt/types.hpp"

namespace ipdt {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
/// Throws ValidationError if `text` is not a complete number.
double parse_double(std::string_view text);

inline constexpr std::string_view kTraceHeader = "t,sp,y,u,d,d_hat";

/// One header line, then one row per sample with round-trip precision.
/// Identical traces give identical bytes.
void write_trace_csv(const SimTrace& trace, std::ostream& out);
std::string trace_to_csv(const SimTrace& trace);
SimTrace parse_trace_csv(std::istream& in);

/// Throws IoError with the path on failure.
void export_trace(const SimTrace& trace, const std::filesystem::path& path);
SimTrace import_trace(const std::filesystem::path& path);

inline constexpr std::string_view kScenarioSchema = "ipdt-scenario/1";

/// `key = value` lines, `#` comments. Breakpoint lists are written as
/// `time:value, time:value`. Key order is fixed, so serializing a parsed file
/// reproduces it.
std::string serialize_scenario(const ScenarioSpec& spec);
ScenarioSpec parse_scenario(std::string_view text);

void save_scenario(const ScenarioSpec& spec, const std::filesystem::path& path);
ScenarioSpec load_scenario(const std::filesystem::path& path);

}  // namespace ipdt
