#include "ipdt/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <system_error>
#include <vector>

#include "ipdt/errors.hpp"

namespace ipdt {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string format_breakpoints(const SignalProfile& profile) {
  std::string out;
  for (const auto& bp : profile.breakpoints()) {
    if (!out.empty()) out += ", ";
    out += format_double(bp.start_time);
    out += ':';
    out += format_double(bp.value);
  }
  return out;
}

SignalProfile parse_breakpoints(std::string_view text) {
  std::vector<Breakpoint> bps;
  for (auto item : split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw ValidationError("breakpoint '" + std::string(item) + "' must be written time:value");
    }
    bps.push_back({parse_double(trim(item.substr(0, colon))),
                   parse_double(trim(item.substr(colon + 1)))});
  }
  return SignalProfile(std::move(bps));
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> values;
  if (trim(text).empty()) return values;
  for (auto item : split(text, ',')) values.push_back(parse_double(item));
  return values;
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ", ";
    out += format_double(v);
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (text.empty() || res.ec != std::errc() || res.ptr != last) {
    throw ValidationError("'" + std::string(text) + "' is not a number");
  }
  return value;
}

void write_trace_csv(const SimTrace& trace, std::ostream& out) {
  validate_trace(trace);
  out << kTraceHeader << '\n';
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << format_double(trace.t[k]) << ',' << format_double(trace.sp[k]) << ','
        << format_double(trace.y[k]) << ',' << format_double(trace.u[k]) << ','
        << format_double(trace.d[k]) << ',' << format_double(trace.d_hat[k]) << '\n';
  }
}

std::string trace_to_csv(const SimTrace& trace) {
  std::ostringstream os;
  write_trace_csv(trace, os);
  return os.str();
}

SimTrace parse_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kTraceHeader) {
    throw ValidationError("trace file must start with the header '" + std::string(kTraceHeader) +
                          "'");
  }
  SimTrace trace;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 6) {
      throw ValidationError("trace row " + std::to_string(row) + " must have 6 columns");
    }
    trace.t.push_back(parse_double(cols[0]));
    trace.sp.push_back(parse_double(cols[1]));
    trace.y.push_back(parse_double(cols[2]));
    trace.u.push_back(parse_double(cols[3]));
    trace.d.push_back(parse_double(cols[4]));
    trace.d_hat.push_back(parse_double(cols[5]));
  }
  if (trace.t.empty()) throw ValidationError("trace file has no samples");
  // dt is not stored; t[1] carries it exactly for any trace written from k * dt.
  trace.dt = trace.t.size() > 1 ? trace.t[1] : 1.0;
  validate_trace(trace);
  return trace;
}

void export_trace(const SimTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_trace_csv(trace, out);
  out.flush();
  if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

SimTrace import_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return parse_trace_csv(in);
}

std::string serialize_scenario(const ScenarioSpec& spec) {
  std::ostringstream os;
  auto kv = [&os](std::string_view key, std::string_view value) {
    os << key << " = " << value << '\n';
  };
  os << "# ipdt scenario\n";
  kv("schema", kScenarioSchema);
  kv("name", spec.name);
  kv("plant.kp", format_double(spec.plant.kp()));
  kv("plant.d", format_double(spec.plant.dead_time()));
  kv("method", method_name(spec.method));
  if (spec.params) {
    kv("params.kc", format_double(spec.params->kc()));
    if (spec.params->ti()) kv("params.ti", format_double(*spec.params->ti()));
    if (spec.params->td()) kv("params.td", format_double(*spec.params->td()));
    kv("params.label", spec.params->label());
  }
  kv("design.am", format_double(spec.design.gain_margin()));
  kv("design.phi_m", format_double(spec.design.phase_margin()));
  kv("design.ts", format_double(spec.design.settling_time()));
  kv("setpoint", format_breakpoints(spec.setpoint));
  kv("disturbance", format_breakpoints(spec.disturbance));
  kv("horizon", format_double(spec.horizon));
  kv("dt", format_double(spec.dt));
  kv("observer", observer_mode_name(spec.observer));
  if (spec.observer_gain) kv("observer.gain", format_double(*spec.observer_gain));
  kv("filter.n", format_double(spec.filter_n));
  kv("derivative", derivative_source_name(spec.derivative_source));
  kv("sweep", sweep_parameter_name(spec.sweep));
  if (!spec.sweep_values.empty()) kv("sweep.values", format_list(spec.sweep_values));
  return os.str();
}

ScenarioSpec parse_scenario(std::string_view text) {
  std::map<std::string, std::string, std::less<>> entries;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("scenario line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(trim(line.substr(0, eq)));
    if (!entries.emplace(key, std::string(trim(line.substr(eq + 1)))).second) {
      throw ValidationError("scenario key '" + key + "' appears twice");
    }
  }

  auto take = [&entries](std::string_view key) -> std::optional<std::string> {
    const auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    std::string value = it->second;
    entries.erase(it);
    return value;
  };
  auto number = [&take](std::string_view key) -> std::optional<double> {
    if (auto v = take(key)) return parse_double(*v);
    return std::nullopt;
  };

  const auto schema = take("schema");
  if (!schema) throw ValidationError("scenario file is missing 'schema'");
  if (*schema != kScenarioSchema) {
    throw ValidationError("unsupported scenario schema '" + *schema + "' (expected " +
                          std::string(kScenarioSchema) + ")");
  }

  ScenarioSpec spec;
  spec.name = take("name").value_or("custom");

  const double kp = number("plant.kp").value_or(spec.plant.kp());
  const double d = number("plant.d").value_or(spec.plant.dead_time());
  spec.plant = IpdtModel(kp, d);

  if (auto m = take("method")) {
    const auto method = parse_method(*m);
    if (!method) throw ValidationError("unknown method '" + *m + "'");
    spec.method = *method;
  }

  const auto kc = number("params.kc");
  const auto ti = number("params.ti");
  const auto td = number("params.td");
  const auto label = take("params.label");
  if (kc) {
    spec.params = ControllerParams(*kc, ti, td, label.value_or("custom"));
  } else if (ti || td || label) {
    throw ValidationError("explicit controller parameters need params.kc");
  }

  spec.design = DesignSpec(number("design.am").value_or(spec.design.gain_margin()),
                           number("design.phi_m").value_or(spec.design.phase_margin()),
                           number("design.ts").value_or(spec.design.settling_time()));

  const auto setpoint = take("setpoint");
  if (!setpoint) throw ValidationError("scenario file is missing 'setpoint'");
  spec.setpoint = parse_breakpoints(*setpoint);
  if (auto dist = take("disturbance")) spec.disturbance = parse_breakpoints(*dist);

  const auto horizon = number("horizon");
  const auto dt = number("dt");
  if (!horizon || !dt) throw ValidationError("scenario file needs 'horizon' and 'dt'");
  spec.horizon = *horizon;
  spec.dt = *dt;
  // Rejects a horizon that is not a whole number of steps.
  (void)to_scenario(spec, false);

  if (auto mode = take("observer")) {
    if (*mode == "auto") {
      spec.observer = ObserverMode::automatic;
    } else if (*mode == "on") {
      spec.observer = ObserverMode::enabled;
    } else if (*mode == "off") {
      spec.observer = ObserverMode::disabled;
    } else {
      throw ValidationError("observer must be auto, on or off (got '" + *mode + "')");
    }
  }
  spec.observer_gain = number("observer.gain");
  spec.filter_n = number("filter.n").value_or(spec.filter_n);
  if (!(spec.filter_n > 0.0)) throw ValidationError("filter.n must be > 0");

  if (auto src = take("derivative")) {
    if (*src == "error") {
      spec.derivative_source = DerivativeSource::error;
    } else if (*src == "measurement") {
      spec.derivative_source = DerivativeSource::measurement;
    } else {
      throw ValidationError("derivative must be error or measurement (got '" + *src + "')");
    }
  }

  if (auto sweep = take("sweep")) {
    if (*sweep == "none") {
      spec.sweep = SweepParameter::none;
    } else if (*sweep == "ts") {
      spec.sweep = SweepParameter::settling_time;
    } else if (*sweep == "am") {
      spec.sweep = SweepParameter::gain_margin;
    } else {
      throw ValidationError("sweep must be none, ts or am (got '" + *sweep + "')");
    }
  }
  if (auto values = take("sweep.values")) spec.sweep_values = parse_list(*values);

  if (!entries.empty()) {
    throw ValidationError("unknown scenario key '" + entries.begin()->first + "'");
  }
  return spec;
}

void save_scenario(const ScenarioSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << serialize_scenario(spec);
  if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_scenario(os.str());
}

}  // namespace ipdt
