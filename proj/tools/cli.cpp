#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ipdt/bench.hpp"
#include "ipdt/errors.hpp"
#include "ipdt/freq.hpp"
#include "ipdt/io.hpp"
#include "ipdt/report.hpp"
#include "ipdt/tuning.hpp"

namespace ipdt::cli {
namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<double> filter_n;
  std::optional<double> observer_gain;
  std::optional<std::string> out_dir;
  std::string format = "table";
};

struct PlantOptions {
  double kp = 0.0506;
  double d = 6.0;
};

struct ControllerOverride {
  std::optional<double> kc;
  std::optional<double> ti;
  std::optional<double> td;
};

ReportFormat report_format(const GlobalOptions& g) {
  const auto f = parse_format(g.format);
  if (!f) throw ValidationError("--format must be json, csv or table");
  return *f;
}

ScenarioSpec load_any_scenario(const std::string& name_or_path) {
  if (parse_scenario_name(name_or_path)) return builtin_scenario(name_or_path);
  if (fs::exists(name_or_path)) return load_scenario(name_or_path);
  throw ValidationError("'" + name_or_path +
                        "' is neither a built-in scenario nor a readable scenario file");
}

void apply_globals(ScenarioSpec& spec, const GlobalOptions& g) {
  if (g.dt) spec.dt = *g.dt;
  if (g.horizon) spec.horizon = *g.horizon;
  if (g.filter_n) {
    if (!(*g.filter_n > 0.0)) throw ValidationError("--filter-n must be > 0");
    spec.filter_n = *g.filter_n;
  }
  if (g.observer_gain) spec.observer_gain = *g.observer_gain;
  (void)to_scenario(spec, false);
}

std::optional<ControllerParams> explicit_params(const ControllerOverride& c) {
  if (!c.kc) {
    if (c.ti || c.td) throw ValidationError("--ti/--td need --kc");
    return std::nullopt;
  }
  return ControllerParams(*c.kc, c.ti, c.td, "custom");
}

TuningMethod require_method(const std::string& name) {
  const auto m = parse_method(name);
  if (!m) {
    throw ValidationError("unknown method '" + name +
                          "' (expected wang-cluett, sree-chidambaram, ali-majhi or proposed-pd)");
  }
  return *m;
}

std::vector<TuningMethod> parse_method_list(const std::string& text) {
  if (text == "all") return {kAllMethods.begin(), kAllMethods.end()};
  std::vector<TuningMethod> methods;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) methods.push_back(require_method(item));
  }
  if (methods.empty()) throw ValidationError("--methods needs at least one method");
  return methods;
}

std::optional<fs::path> output_dir(const GlobalOptions& g) {
  if (!g.out_dir || g.out_dir->empty()) return std::nullopt;
  fs::path dir(*g.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

void warn_sign_flip(std::ostream& err, bool flipped) {
  if (flipped) {
    err << "warning: the derivative-time formula returned a negative value; its magnitude is "
           "used, so the specified margins are not met exactly\n";
  }
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tuning and closed-loop simulation of integrating processes with dead time",
               "ipdt"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--dt", g.dt, "Simulation step size (s)")->group("Global");
  app.add_option("--horizon", g.horizon, "Simulation horizon (s)")->group("Global");
  app.add_option("--filter-n", g.filter_n, "Derivative filter divisor N")->group("Global");
  app.add_option("--observer-gain", g.observer_gain, "Disturbance observer gain")
      ->group("Global");
  app.add_option("--out-dir", g.out_dir, "Directory for trace and plot files")
      ->envname("IPDT_OUT_DIR")
      ->group("Global");
  app.add_option("--format", g.format, "Report format: json, csv or table")
      ->check(CLI::IsMember({"json", "csv", "table"}))
      ->group("Global");

  // tune
  auto* tune = app.add_subcommand("tune", "Compute PD parameters from a design specification");
  tune->fallthrough();
  PlantOptions tune_plant;
  double ts = 40.0;
  std::optional<double> am, am_db, pm_rad, pm_deg;
  tune->add_option("--kp", tune_plant.kp, "Process gain")->capture_default_str();
  tune->add_option("--d", tune_plant.d, "Dead time (s)")->capture_default_str();
  tune->add_option("--ts", ts, "Desired settling time (s)")->capture_default_str();
  auto* am_opt = tune->add_option("--am", am, "Gain margin (ratio, default 2)");
  tune->add_option("--am-db", am_db, "Gain margin (dB)")->excludes(am_opt);
  auto* pm_opt = tune->add_option("--pm", pm_rad, "Phase margin (rad, default pi)");
  tune->add_option("--pm-deg", pm_deg, "Phase margin (degrees)")->excludes(pm_opt);

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate one controller on a scenario");
  simulate_cmd->fallthrough();
  std::string sim_scenario = "step_tracking";
  std::optional<std::string> sim_method;
  std::optional<std::string> sim_trace;
  std::optional<std::string> sim_observer;
  std::optional<std::string> sim_derivative;
  ControllerOverride sim_ctrl;
  simulate_cmd->add_option("--scenario", sim_scenario, "Built-in scenario name or scenario file")
      ->capture_default_str();
  simulate_cmd->add_option("--method", sim_method, "Tuning method");
  simulate_cmd->add_option("--kc", sim_ctrl.kc, "Explicit proportional gain");
  simulate_cmd->add_option("--ti", sim_ctrl.ti, "Explicit integral time (s)");
  simulate_cmd->add_option("--td", sim_ctrl.td, "Explicit derivative time (s)");
  simulate_cmd->add_option("--observer", sim_observer, "Disturbance observer: auto, on, off")
      ->check(CLI::IsMember({"auto", "on", "off"}));
  simulate_cmd->add_option("--derivative", sim_derivative, "Derivative on error or measurement")
      ->check(CLI::IsMember({"error", "measurement"}));
  simulate_cmd->add_option("--trace", sim_trace, "Trace CSV path (default <out-dir>/<name>.csv)");

  // compare
  auto* compare = app.add_subcommand("compare", "Compare tuning methods on a scenario");
  compare->fallthrough();
  std::string cmp_scenario = "step_tracking";
  std::string cmp_methods = "all";
  std::optional<std::string> cmp_observer;
  compare->add_option("--scenario", cmp_scenario, "Built-in scenario name or scenario file")
      ->capture_default_str();
  compare->add_option("--methods", cmp_methods, "Comma-separated methods or 'all'")
      ->capture_default_str();
  compare->add_option("--observer", cmp_observer, "Disturbance observer: auto, on, off")
      ->check(CLI::IsMember({"auto", "on", "off"}));

  // margins
  auto* margins = app.add_subcommand("margins", "Measure gain and phase margins");
  margins->fallthrough();
  PlantOptions m_plant;
  std::optional<std::string> m_method;
  ControllerOverride m_ctrl;
  MarginOptions m_opts;
  margins->add_option("--kp", m_plant.kp, "Process gain")->capture_default_str();
  margins->add_option("--d", m_plant.d, "Dead time (s)")->capture_default_str();
  margins->add_option("--method", m_method, "Use a tuning method's parameters");
  margins->add_option("--kc", m_ctrl.kc, "Proportional gain");
  margins->add_option("--ti", m_ctrl.ti, "Integral time (s)");
  margins->add_option("--td", m_ctrl.td, "Derivative time (s)");
  margins->add_option("--w-min", m_opts.w_min, "Lowest scan frequency (rad/s)")
      ->capture_default_str();
  margins->add_option("--w-max", m_opts.w_max, "Highest scan frequency (rad/s)")
      ->capture_default_str();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a design-parameter sweep");
  sweep->fallthrough();
  std::string sw_scenario = "sweep_ts";
  bool sw_script = false;
  sweep->add_option("--scenario", sw_scenario, "sweep_ts, sweep_am or a sweep scenario file")
      ->capture_default_str();
  sweep->add_flag("--plot-script", sw_script, "Also write a gnuplot script");

  // scenario
  auto* scenario_cmd = app.add_subcommand("scenario", "Print a built-in scenario as a file");
  std::string sc_name = "step_tracking";
  std::optional<std::string> sc_output;
  scenario_cmd->add_option("name", sc_name, "Built-in scenario name")->capture_default_str();
  scenario_cmd->add_option("-o,--output", sc_output, "Write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    const ReportFormat format = report_format(g);

    if (tune->parsed()) {
      const IpdtModel model(tune_plant.kp, tune_plant.d);
      const double gain_margin = am_db ? gain_margin_from_db(*am_db) : am.value_or(2.0);
      const double phase_margin =
          pm_deg ? degrees_to_radians(*pm_deg) : pm_rad.value_or(std::numbers::pi);
      const DesignSpec spec(gain_margin, phase_margin, ts);
      const TuneReport report = tune_pd(model, spec);
      warn_sign_flip(err, report.td_sign_flipped);
      out << render_tune(report, model, format);
      return kExitOk;
    }

    if (simulate_cmd->parsed()) {
      ScenarioSpec spec = load_any_scenario(sim_scenario);
      apply_globals(spec, g);
      if (sim_method) spec.method = require_method(*sim_method);
      if (auto p = explicit_params(sim_ctrl)) spec.params = *p;
      if (sim_observer) {
        spec.observer = *sim_observer == "on"    ? ObserverMode::enabled
                        : *sim_observer == "off" ? ObserverMode::disabled
                                                 : ObserverMode::automatic;
      }
      if (sim_derivative) {
        spec.derivative_source = *sim_derivative == "measurement" ? DerivativeSource::measurement
                                                                  : DerivativeSource::error;
      }
      MethodResult result = run_single(spec);
      warn_sign_flip(err, result.controller.td_sign_flipped);

      fs::path trace_path;
      if (sim_trace) {
        trace_path = *sim_trace;
      } else {
        const fs::path dir = output_dir(g).value_or(fs::path("."));
        const std::string who = spec.params ? "custom" : std::string(method_name(spec.method));
        trace_path = dir / (spec.name + "_" + who + ".csv");
      }
      export_trace(result.trace, trace_path);
      result.trace_file = trace_path.string();

      ComparisonReport report{spec.name, {}};
      report.rows.push_back(std::move(result));
      out << render_comparison(report, format);
      return kExitOk;
    }

    if (compare->parsed()) {
      ScenarioSpec spec = load_any_scenario(cmp_scenario);
      apply_globals(spec, g);
      if (cmp_observer) {
        spec.observer = *cmp_observer == "on"    ? ObserverMode::enabled
                        : *cmp_observer == "off" ? ObserverMode::disabled
                                                 : ObserverMode::automatic;
      }
      const auto methods = parse_method_list(cmp_methods);
      ComparisonReport report = run_comparison(spec, methods);
      for (const auto& row : report.rows) warn_sign_flip(err, row.controller.td_sign_flipped);
      if (const auto dir = output_dir(g)) {
        for (auto& row : report.rows) {
          const fs::path path = *dir / (spec.name + "_" + std::string(method_name(row.method)) + ".csv");
          export_trace(row.trace, path);
          row.trace_file = path.string();
        }
      }
      out << render_comparison(report, format);
      return kExitOk;
    }

    if (margins->parsed()) {
      const IpdtModel model(m_plant.kp, m_plant.d);
      std::optional<ControllerParams> params = explicit_params(m_ctrl);
      if (!params) {
        if (!m_method) throw ValidationError("margins needs --method or --kc");
        params = baseline_params(require_method(*m_method));
      }
      out << render_margins(measure_margins(model, *params, m_opts), format);
      return kExitOk;
    }

    if (sweep->parsed()) {
      ScenarioSpec spec = load_any_scenario(sw_scenario);
      apply_globals(spec, g);
      const SweepReport report = run_sweep(spec);
      for (const auto& p : report.points) warn_sign_flip(err, p.td_sign_flipped);
      const fs::path dir = output_dir(g).value_or(fs::path("."));
      const fs::path data = dir / (spec.name + "_plot.csv");
      write_text(data, sweep_plot_data(report));
      if (sw_script) {
        write_text(dir / (spec.name + ".gp"), sweep_plot_script(report, data.filename().string()));
      }
      out << render_sweep(report, format);
      return kExitOk;
    }

    if (scenario_cmd->parsed()) {
      const std::string text = serialize_scenario(builtin_scenario(sc_name));
      if (sc_output) {
        write_text(*sc_output, text);
      } else {
        out << text;
      }
      return kExitOk;
    }
  } catch (const NumericError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace ipdt::cli
