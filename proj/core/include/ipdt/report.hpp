#pragma once

#include <string>
#include <string_view>

#include "ipdt/bench.hpp"
#include "ipdt/freq.hpp"
#include "ipdt/tuning.hpp"

namespace ipdt {

enum class ReportFormat { json, csv, table };

std::string_view format_name(ReportFormat format);
std::optional<ReportFormat> parse_format(std::string_view name);

// JSON objects are emitted with sorted keys and round-trip number formatting,
// so the same report always renders to the same bytes.

std::string render_tune(const TuneReport& report, const IpdtModel& model, ReportFormat format);
std::string render_margins(const MarginReport& report, ReportFormat format);
std::string render_comparison(const ComparisonReport& report, ReportFormat format);
std::string render_sweep(const SweepReport& report, ReportFormat format);

/// Column-per-run output data for plotting a sweep: `t,y@<value>,...`.
std::string sweep_plot_data(const SweepReport& report);
/// gnuplot script that plots the file written by sweep_plot_data.
std::string sweep_plot_script(const SweepReport& report, std::string_view data_file);

}  // namespace ipdt
