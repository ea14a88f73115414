#include "ipdt/bench.hpp"

#include <algorithm>
#include <future>
#include <numbers>
#include <string>

#include "ipdt/errors.hpp"

namespace ipdt {

std::string_view scenario_name(BuiltinScenario scenario) {
  switch (scenario) {
    case BuiltinScenario::step_tracking:
      return "step_tracking";
    case BuiltinScenario::servo_staircase:
      return "servo_staircase";
    case BuiltinScenario::regulatory:
      return "regulatory";
    case BuiltinScenario::servo_plus_regulatory:
      return "servo_plus_regulatory";
    case BuiltinScenario::sweep_ts:
      return "sweep_ts";
    case BuiltinScenario::sweep_am:
      return "sweep_am";
  }
  return "unknown";
}

std::optional<BuiltinScenario> parse_scenario_name(std::string_view name) {
  for (BuiltinScenario s : kAllBuiltinScenarios) {
    if (scenario_name(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view observer_mode_name(ObserverMode mode) {
  switch (mode) {
    case ObserverMode::automatic:
      return "auto";
    case ObserverMode::enabled:
      return "on";
    case ObserverMode::disabled:
      return "off";
  }
  return "auto";
}

std::string_view sweep_parameter_name(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::none:
      return "none";
    case SweepParameter::settling_time:
      return "ts";
    case SweepParameter::gain_margin:
      return "am";
  }
  return "none";
}

std::string_view derivative_source_name(DerivativeSource source) {
  return source == DerivativeSource::error ? "error" : "measurement";
}

ScenarioSpec builtin_scenario(BuiltinScenario scenario) {
  ScenarioSpec spec;
  spec.name = std::string(scenario_name(scenario));
  switch (scenario) {
    case BuiltinScenario::step_tracking:
      break;
    case BuiltinScenario::servo_staircase:
      spec.setpoint = SignalProfile({{0.0, 1.0}, {100.0, 3.0}, {200.0, 2.0}});
      spec.horizon = 300.0;
      break;
    case BuiltinScenario::regulatory:
      spec.setpoint = SignalProfile::constant(0.0);
      spec.disturbance = SignalProfile::constant(1.0);
      break;
    case BuiltinScenario::servo_plus_regulatory:
      spec.disturbance = SignalProfile({{0.0, 0.0}, {100.0, 1.0}});
      break;
    case BuiltinScenario::sweep_ts:
      spec.sweep = SweepParameter::settling_time;
      spec.sweep_values = {40.0, 50.0, 60.0, 70.0};
      spec.horizon = 300.0;
      break;
    case BuiltinScenario::sweep_am:
      spec.sweep = SweepParameter::gain_margin;
      spec.sweep_values = {1.0, 1.5, 2.0, 2.5};
      spec.horizon = 300.0;
      break;
  }
  return spec;
}

ScenarioSpec builtin_scenario(std::string_view name) {
  const auto s = parse_scenario_name(name);
  if (!s) throw ValidationError("unknown built-in scenario '" + std::string(name) + "'");
  return builtin_scenario(*s);
}

ResolvedController resolve_controller(const ScenarioSpec& spec, TuningMethod method) {
  ResolvedController out{baseline_params(method)};
  if (spec.params) {
    out.params = *spec.params;
  } else if (method == TuningMethod::proposed_pd) {
    const TuneReport report = tune_pd(spec.plant, spec.design);
    out.params = report.params;
    out.td_sign_flipped = report.td_sign_flipped;
  }
  switch (spec.observer) {
    case ObserverMode::enabled:
      out.observer_enabled = true;
      break;
    case ObserverMode::disabled:
      out.observer_enabled = false;
      break;
    case ObserverMode::automatic:
      out.observer_enabled =
          method == TuningMethod::proposed_pd && !spec.params && spec.is_regulatory();
      break;
  }
  if (out.observer_enabled) out.observer_gain = spec.observer_gain.value_or(out.params.kc());
  return out;
}

Scenario to_scenario(const ScenarioSpec& spec, bool dob_enabled) {
  return Scenario(spec.setpoint, spec.disturbance, spec.horizon, spec.dt, dob_enabled);
}

SimOptions to_sim_options(const ScenarioSpec& spec, const ResolvedController& controller) {
  SimOptions options;
  options.controller.filter_n = spec.filter_n;
  options.controller.derivative_source = spec.derivative_source;
  if (controller.observer_enabled) options.observer_gain = controller.observer_gain;
  return options;
}

namespace {

// End of the first setpoint segment, cut short by the first disturbance change.
double first_step_end(const ScenarioSpec& spec) {
  double end = spec.horizon;
  const auto& sp = spec.setpoint.breakpoints();
  if (sp.size() > 1) end = std::min(end, sp[1].start_time);
  const auto& dist = spec.disturbance.breakpoints();
  for (std::size_t i = 1; i < dist.size(); ++i) {
    if (dist[i].value != dist[i - 1].value) {
      end = std::min(end, dist[i].start_time);
      break;
    }
  }
  return end;
}

MethodResult evaluate(const ScenarioSpec& spec, TuningMethod method) {
  MethodResult result{method, resolve_controller(spec, method), std::nullopt, {}, {}, {}, {}, {},
                      std::nullopt};
  const Scenario scenario = to_scenario(spec, result.controller.observer_enabled);
  result.trace = simulate(spec.plant, result.controller.params, scenario,
                          to_sim_options(spec, result.controller));

  const Window whole{0.0, spec.horizon};
  result.indices = index_report(result.trace, whole);
  result.segments = segments_from_setpoint(spec.setpoint, spec.horizon);
  result.segment_indices = servo_segment_indices(result.trace, result.segments);

  const double first_sp = spec.setpoint.breakpoints().front().value;
  const double step_end = first_step_end(spec);
  if (first_sp != 0.0 && step_end > 0.0) {
    result.step = step_specs(result.trace, 0.0, 0.0, first_sp, step_end);
  }
  result.margins = measure_margins(spec.plant, result.controller.params);
  return result;
}

}  // namespace

ComparisonReport run_comparison(const ScenarioSpec& spec,
                                const std::vector<TuningMethod>& methods) {
  ComparisonReport report{spec.name, {}};
  std::vector<std::future<MethodResult>> pending;
  pending.reserve(methods.size());
  for (TuningMethod m : methods) {
    pending.push_back(std::async(std::launch::async, [&spec, m] { return evaluate(spec, m); }));
  }
  report.rows.reserve(methods.size());
  for (auto& f : pending) report.rows.push_back(f.get());
  return report;
}

MethodResult run_single(const ScenarioSpec& spec) { return evaluate(spec, spec.method); }

SweepReport run_sweep(const ScenarioSpec& spec) {
  if (spec.sweep == SweepParameter::none || spec.sweep_values.empty()) {
    throw ValidationError("scenario '" + spec.name + "' is not a sweep scenario");
  }
  const double initial = 0.0;
  const double final = spec.setpoint.breakpoints().front().value;
  if (final == initial) throw ValidationError("sweep scenarios need a non-zero setpoint step");

  auto run_point = [&spec, initial, final](double value) {
    const DesignSpec& base = spec.design;
    const DesignSpec design =
        spec.sweep == SweepParameter::settling_time
            ? DesignSpec(base.gain_margin(), base.phase_margin(), value)
            : DesignSpec(value, base.phase_margin(), base.settling_time());
    const TuneReport tuned = tune_pd(spec.plant, design);
    ResolvedController controller{tuned.params, tuned.td_sign_flipped};
    SimTrace trace = simulate(spec.plant, tuned.params, to_scenario(spec, false),
                              to_sim_options(spec, controller));
    const StepSpecs step = step_specs(trace, 0.0, initial, final, first_step_end(spec));
    const OscillationSummary osc = oscillation_summary(trace, initial, final);
    return SweepPoint{value, tuned.params, tuned.td_sign_flipped, step, osc, std::move(trace)};
  };

  std::vector<std::future<SweepPoint>> pending;
  for (double v : spec.sweep_values) {
    pending.push_back(std::async(std::launch::async, run_point, v));
  }
  SweepReport report{spec.name, spec.sweep, {}, std::nullopt, std::nullopt};
  for (auto& f : pending) report.points.push_back(f.get());

  if (report.points.size() >= 2) {
    bool increasing = true;
    bool decreasing = true;
    for (std::size_t i = 1; i < report.points.size(); ++i) {
      const auto& a = report.points[i - 1];
      const auto& b = report.points[i];
      if (!(a.step.settling_time && b.step.settling_time &&
            *b.step.settling_time > *a.step.settling_time)) {
        increasing = false;
      }
      if (!(b.oscillation.peak_to_peak_after_first_peak <
            a.oscillation.peak_to_peak_after_first_peak)) {
        decreasing = false;
      }
    }
    report.settling_strictly_increasing = increasing;
    report.oscillation_strictly_decreasing = decreasing;
  }
  return report;
}

}  // namespace ipdt
