#include "ipdt/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "ipdt/io.hpp"

namespace ipdt {
namespace {

using nlohmann::json;

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string csv_opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }
std::string csv_num(double v) { return std::isfinite(v) ? format_double(v) : ""; }

json params_json(const ControllerParams& p) {
  return {{"label", p.label()}, {"kc", p.kc()}, {"ti", opt(p.ti())}, {"td", opt(p.td())}};
}

json margins_json(const MarginReport& m) {
  return {{"am", finite_or_null(m.am)},
          {"am_db", m.phase_crossover_found ? json(gain_margin_to_db(m.am)) : json(nullptr)},
          {"w_pc", m.phase_crossover_found ? json(m.w_pc) : json(nullptr)},
          {"phi_m", finite_or_null(m.phi_m)},
          {"phi_m_deg", m.gain_crossover_found ? json(radians_to_degrees(m.phi_m)) : json(nullptr)},
          {"w_gc", m.gain_crossover_found ? json(m.w_gc) : json(nullptr)},
          {"phase_crossover_found", m.phase_crossover_found},
          {"gain_crossover_found", m.gain_crossover_found},
          {"phase_crossover_count", m.phase_crossover_count},
          {"gain_crossover_count", m.gain_crossover_count}};
}

json step_json(const StepSpecs& s) {
  return {{"rise_time", opt(s.rise_time)},
          {"settling_time", opt(s.settling_time)},
          {"overshoot_percent", s.overshoot},
          {"settled", s.settled}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string fixed(double v, int precision = 4) {
  if (!std::isfinite(v)) return "-";
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

std::string fixed(const std::optional<double>& v, int precision = 4) {
  return v ? fixed(*v, precision) : "-";
}

}  // namespace

std::string_view format_name(ReportFormat format) {
  switch (format) {
    case ReportFormat::json:
      return "json";
    case ReportFormat::csv:
      return "csv";
    case ReportFormat::table:
      return "table";
  }
  return "table";
}

std::optional<ReportFormat> parse_format(std::string_view name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  if (name == "table") return ReportFormat::table;
  return std::nullopt;
}

std::string render_tune(const TuneReport& report, const IpdtModel& model, ReportFormat format) {
  const auto& p = report.params;
  switch (format) {
    case ReportFormat::json:
      return dump({{"plant", {{"kp", model.kp()}, {"d", model.dead_time()}}},
                   {"spec",
                    {{"am", report.spec.gain_margin()},
                     {"phi_m", report.spec.phase_margin()},
                     {"ts", report.spec.settling_time()}}},
                   {"crossovers", {{"w_pc", report.crossovers.w_pc}, {"w_gc", report.crossovers.w_gc}}},
                   {"params", params_json(p)},
                   {"td_sign_flipped", report.td_sign_flipped}});
    case ReportFormat::csv: {
      std::ostringstream os;
      os << "kp,d,am,phi_m,ts,w_pc,w_gc,kc,td,td_sign_flipped\n"
         << format_double(model.kp()) << ',' << format_double(model.dead_time()) << ','
         << format_double(report.spec.gain_margin()) << ','
         << format_double(report.spec.phase_margin()) << ','
         << format_double(report.spec.settling_time()) << ','
         << format_double(report.crossovers.w_pc) << ',' << format_double(report.crossovers.w_gc)
         << ',' << format_double(p.kc()) << ',' << format_double(p.derivative_time()) << ','
         << (report.td_sign_flipped ? "true" : "false") << '\n';
      return os.str();
    }
    case ReportFormat::table: {
      std::ostringstream os;
      os << "plant        kp = " << model.kp() << ", d = " << model.dead_time() << " s\n"
         << "spec         am = " << report.spec.gain_margin() << " ("
         << fixed(gain_margin_to_db(report.spec.gain_margin())) << " dB), phi_m = "
         << fixed(radians_to_degrees(report.spec.phase_margin()), 2)
         << " deg, ts = " << report.spec.settling_time() << " s\n"
         << "crossovers   w_pc = " << fixed(report.crossovers.w_pc, 6)
         << " rad/s, w_gc = " << fixed(report.crossovers.w_gc, 6) << " rad/s\n"
         << "controller   kc = " << fixed(p.kc()) << ", td = " << fixed(p.derivative_time())
         << " s\n";
      if (report.td_sign_flipped) os << "note         td sign was flipped\n";
      return os.str();
    }
  }
  return {};
}

std::string render_margins(const MarginReport& m, ReportFormat format) {
  switch (format) {
    case ReportFormat::json:
      return dump(margins_json(m));
    case ReportFormat::csv: {
      std::ostringstream os;
      os << "am,w_pc,phi_m,w_gc,phase_crossover_found,gain_crossover_found,"
            "phase_crossover_count,gain_crossover_count\n"
         << csv_num(m.am) << ',' << (m.phase_crossover_found ? format_double(m.w_pc) : "") << ','
         << csv_num(m.phi_m) << ',' << (m.gain_crossover_found ? format_double(m.w_gc) : "")
         << ',' << m.phase_crossover_found << ',' << m.gain_crossover_found << ','
         << m.phase_crossover_count << ',' << m.gain_crossover_count << '\n';
      return os.str();
    }
    case ReportFormat::table: {
      std::ostringstream os;
      if (m.phase_crossover_found) {
        os << "gain margin   " << fixed(m.am) << " (" << fixed(gain_margin_to_db(m.am))
           << " dB) at w_pc = " << fixed(m.w_pc, 6) << " rad/s\n";
      } else {
        os << "gain margin   infinite (no phase crossover in range)\n";
      }
      if (m.gain_crossover_found) {
        os << "phase margin  " << fixed(m.phi_m) << " rad (" << fixed(radians_to_degrees(m.phi_m), 2)
           << " deg) at w_gc = " << fixed(m.w_gc, 6) << " rad/s\n";
        if (m.gain_crossover_count > 1) {
          os << "note          " << m.gain_crossover_count
             << " gain crossovers found; the lowest is reported\n";
        }
      } else {
        os << "phase margin  undefined (no gain crossover in range)\n";
      }
      return os.str();
    }
  }
  return {};
}

std::string render_comparison(const ComparisonReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::json: {
      json rows = json::array();
      for (const auto& r : report.rows) {
        json segs = json::array();
        for (std::size_t i = 0; i < r.segments.size(); ++i) {
          segs.push_back({{"t0", r.segments[i].window.t0},
                          {"t1", r.segments[i].window.t1},
                          {"sp", r.segments[i].sp_value},
                          {"ise", r.segment_indices[i].ise},
                          {"iae", r.segment_indices[i].iae},
                          {"itae", r.segment_indices[i].itae}});
        }
        rows.push_back({{"method", method_name(r.method)},
                        {"params", params_json(r.controller.params)},
                        {"td_sign_flipped", r.controller.td_sign_flipped},
                        {"observer", r.controller.observer_enabled},
                        {"observer_gain", r.controller.observer_enabled
                                              ? json(r.controller.observer_gain)
                                              : json(nullptr)},
                        {"step", r.step ? step_json(*r.step) : json(nullptr)},
                        {"indices",
                         {{"ise", r.indices.ise},
                          {"iae", r.indices.iae},
                          {"itae", r.indices.itae},
                          {"energy", r.indices.energy}}},
                        {"segments", segs},
                        {"margins", margins_json(r.margins)},
                        {"trace_file", r.trace_file ? json(*r.trace_file) : json(nullptr)}});
      }
      return dump({{"scenario", report.scenario}, {"methods", rows}});
    }
    case ReportFormat::csv: {
      std::ostringstream os;
      const std::size_t nseg = report.rows.empty() ? 0 : report.rows.front().segments.size();
      os << "method,kc,ti,td,observer,observer_gain,rise_time,settling_time,overshoot,ise,iae,"
            "itae,energy,am,phi_m";
      for (std::size_t i = 1; i <= nseg; ++i) os << ",seg" << i << "_ise,seg" << i << "_iae";
      os << ",trace_file\n";
      for (const auto& r : report.rows) {
        const auto& p = r.controller.params;
        os << method_name(r.method) << ',' << format_double(p.kc()) << ',' << csv_opt(p.ti())
           << ',' << csv_opt(p.td()) << ',' << (r.controller.observer_enabled ? "true" : "false")
           << ','
           << (r.controller.observer_enabled ? format_double(r.controller.observer_gain) : "")
           << ',' << (r.step ? csv_opt(r.step->rise_time) : "") << ','
           << (r.step ? csv_opt(r.step->settling_time) : "") << ','
           << (r.step ? format_double(r.step->overshoot) : "") << ','
           << format_double(r.indices.ise) << ',' << format_double(r.indices.iae) << ','
           << format_double(r.indices.itae) << ',' << format_double(r.indices.energy) << ','
           << (r.margins.phase_crossover_found ? csv_num(r.margins.am) : "") << ','
           << (r.margins.gain_crossover_found ? csv_num(r.margins.phi_m) : "");
        for (const auto& s : r.segment_indices) {
          os << ',' << format_double(s.ise) << ',' << format_double(s.iae);
        }
        os << ',' << r.trace_file.value_or("") << '\n';
      }
      return os.str();
    }
    case ReportFormat::table: {
      std::ostringstream os;
      os << "scenario: " << report.scenario << "\n";
      os << std::left << std::setw(18) << "method" << std::right << std::setw(9) << "kc"
         << std::setw(9) << "ti" << std::setw(8) << "td" << std::setw(5) << "dob" << std::setw(9)
         << "rise" << std::setw(9) << "settle" << std::setw(9) << "os%" << std::setw(10) << "ISE"
         << std::setw(10) << "IAE" << std::setw(11) << "ITAE" << std::setw(11) << "energy"
         << "\n";
      for (const auto& r : report.rows) {
        const auto& p = r.controller.params;
        os << std::left << std::setw(18) << method_name(r.method) << std::right << std::setw(9)
           << fixed(p.kc()) << std::setw(9) << fixed(p.ti(), 3) << std::setw(8) << fixed(p.td())
           << std::setw(5) << (r.controller.observer_enabled ? "yes" : "no") << std::setw(9)
           << (r.step ? fixed(r.step->rise_time, 2) : "-") << std::setw(9)
           << (r.step ? fixed(r.step->settling_time, 2) : "-") << std::setw(9)
           << (r.step ? fixed(r.step->overshoot, 2) : "-") << std::setw(10)
           << fixed(r.indices.ise) << std::setw(10) << fixed(r.indices.iae) << std::setw(11)
           << fixed(r.indices.itae, 2) << std::setw(11) << fixed(r.indices.energy, 2) << "\n";
      }
      const std::size_t nseg = report.rows.empty() ? 0 : report.rows.front().segments.size();
      if (nseg > 1) {
        os << "\nper-segment ISE / IAE\n";
        for (const auto& r : report.rows) {
          os << std::left << std::setw(18) << method_name(r.method) << std::right;
          for (std::size_t i = 0; i < nseg; ++i) {
            os << "  sp=" << r.segments[i].sp_value << ": " << fixed(r.segment_indices[i].ise)
               << " / " << fixed(r.segment_indices[i].iae);
          }
          os << "\n";
        }
      }
      return os.str();
    }
  }
  return {};
}

std::string render_sweep(const SweepReport& report, ReportFormat format) {
  const std::string_view param = sweep_parameter_name(report.parameter);
  switch (format) {
    case ReportFormat::json: {
      json points = json::array();
      for (const auto& p : report.points) {
        points.push_back({{"value", p.value},
                          {"params", params_json(p.params)},
                          {"td_sign_flipped", p.td_sign_flipped},
                          {"step", step_json(p.step)},
                          {"peak_to_peak_after_first_peak",
                           p.oscillation.peak_to_peak_after_first_peak},
                          {"oscillation_cycles", p.oscillation.cycles}});
      }
      auto tri = [](const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); };
      return dump({{"scenario", report.scenario},
                   {"parameter", param},
                   {"points", points},
                   {"settling_strictly_increasing", tri(report.settling_strictly_increasing)},
                   {"oscillation_strictly_decreasing", tri(report.oscillation_strictly_decreasing)}});
    }
    case ReportFormat::csv: {
      std::ostringstream os;
      os << param << ",kc,td,td_sign_flipped,rise_time,settling_time,overshoot,peak_to_peak,cycles\n";
      for (const auto& p : report.points) {
        os << format_double(p.value) << ',' << format_double(p.params.kc()) << ','
           << format_double(p.params.derivative_time()) << ','
           << (p.td_sign_flipped ? "true" : "false") << ',' << csv_opt(p.step.rise_time) << ','
           << csv_opt(p.step.settling_time) << ',' << format_double(p.step.overshoot) << ','
           << format_double(p.oscillation.peak_to_peak_after_first_peak) << ','
           << p.oscillation.cycles << '\n';
      }
      return os.str();
    }
    case ReportFormat::table: {
      std::ostringstream os;
      os << "sweep over " << param << " (scenario " << report.scenario << ")\n";
      os << std::setw(8) << param << std::setw(9) << "kc" << std::setw(9) << "td" << std::setw(9)
         << "rise" << std::setw(9) << "settle" << std::setw(9) << "os%" << std::setw(12)
         << "p2p" << std::setw(8) << "cycles\n";
      for (const auto& p : report.points) {
        os << std::setw(8) << p.value << std::setw(9) << fixed(p.params.kc()) << std::setw(9)
           << fixed(p.params.derivative_time()) << std::setw(9) << fixed(p.step.rise_time, 2)
           << std::setw(9) << fixed(p.step.settling_time, 2) << std::setw(9)
           << fixed(p.step.overshoot, 2) << std::setw(12)
           << fixed(p.oscillation.peak_to_peak_after_first_peak, 6) << std::setw(7)
           << p.oscillation.cycles << "\n";
      }
      if (report.settling_strictly_increasing) {
        os << "settling strictly increasing: " << (*report.settling_strictly_increasing ? "yes" : "no")
           << "\n";
      }
      if (report.oscillation_strictly_decreasing) {
        os << "oscillation strictly decreasing: "
           << (*report.oscillation_strictly_decreasing ? "yes" : "no") << "\n";
      }
      return os.str();
    }
  }
  return {};
}

std::string sweep_plot_data(const SweepReport& report) {
  std::ostringstream os;
  os << 't';
  for (const auto& p : report.points) os << ",y@" << format_double(p.value);
  os << '\n';
  if (report.points.empty()) return os.str();
  const std::size_t n = report.points.front().trace.size();
  for (std::size_t k = 0; k < n; ++k) {
    os << format_double(report.points.front().trace.t[k]);
    for (const auto& p : report.points) os << ',' << format_double(p.trace.y[k]);
    os << '\n';
  }
  return os.str();
}

std::string sweep_plot_script(const SweepReport& report, std::string_view data_file) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set xlabel 't (s)'\nset ylabel 'y'\n"
     << "set title 'sweep over " << sweep_parameter_name(report.parameter) << "'\n"
     << "plot ";
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    if (i > 0) os << ", \\\n     ";
    os << "'" << data_file << "' using 1:" << (i + 2) << " with lines";
  }
  os << "\npause -1\n";
  return os.str();
}

}  // namespace ipdt
