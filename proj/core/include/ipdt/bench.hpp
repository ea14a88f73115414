#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ipdt/freq.hpp"
#include "ipdt/metrics.hpp"
#include "ipdt/sim.hpp"
#include "ipdt/tuning.hpp"
#include "ipdt/types.hpp"

namespace ipdt {

enum class BuiltinScenario {
  step_tracking,
  servo_staircase,
  regulatory,
  servo_plus_regulatory,
  sweep_ts,
  sweep_am,
};

inline constexpr BuiltinScenario kAllBuiltinScenarios[] = {
    BuiltinScenario::step_tracking,         BuiltinScenario::servo_staircase,
    BuiltinScenario::regulatory,            BuiltinScenario::servo_plus_regulatory,
    BuiltinScenario::sweep_ts,              BuiltinScenario::sweep_am,
};

std::string_view scenario_name(BuiltinScenario scenario);
std::optional<BuiltinScenario> parse_scenario_name(std::string_view name);

enum class ObserverMode { automatic, enabled, disabled };
enum class SweepParameter { none, settling_time, gain_margin };

std::string_view observer_mode_name(ObserverMode mode);
std::string_view sweep_parameter_name(SweepParameter parameter);
std::string_view derivative_source_name(DerivativeSource source);

/// Everything needed to reproduce one experiment. This is the unit that the
/// scenario file format stores.
struct ScenarioSpec {
  std::string name;
  IpdtModel plant = canonical_plant();
  TuningMethod method = TuningMethod::proposed_pd;
  /// Replaces the method's parameters when present.
  std::optional<ControllerParams> params;
  DesignSpec design{2.0, std::numbers::pi, 40.0};
  SignalProfile setpoint = SignalProfile::constant(1.0);
  SignalProfile disturbance = SignalProfile::constant(0.0);
  double horizon = 200.0;
  double dt = 0.01;
  ObserverMode observer = ObserverMode::automatic;
  std::optional<double> observer_gain;
  double filter_n = 10.0;
  DerivativeSource derivative_source = DerivativeSource::error;
  SweepParameter sweep = SweepParameter::none;
  std::vector<double> sweep_values;

  /// A non-zero disturbance anywhere in the profile.
  bool is_regulatory() const noexcept { return !disturbance.is_identically_zero(); }

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

ScenarioSpec builtin_scenario(BuiltinScenario scenario);
/// Throws ValidationError for an unknown name.
ScenarioSpec builtin_scenario(std::string_view name);

struct ResolvedController {
  ControllerParams params;
  bool td_sign_flipped = false;
  bool observer_enabled = false;
  double observer_gain = 0.0;
};

/// Parameters for `method` under `spec`: the tuning rule for the proposed
/// method, published constants for the baselines, or the explicit override.
/// The observer is switched on automatically only for the proposed method in
/// scenarios with a disturbance.
ResolvedController resolve_controller(const ScenarioSpec& spec, TuningMethod method);

Scenario to_scenario(const ScenarioSpec& spec, bool dob_enabled);
SimOptions to_sim_options(const ScenarioSpec& spec, const ResolvedController& controller);

struct MethodResult {
  TuningMethod method;
  ResolvedController controller;
  std::optional<StepSpecs> step;  // first setpoint step, when there is one
  IndexReport indices;            // whole horizon
  std::vector<ServoSegment> segments;
  std::vector<IntegralIndices> segment_indices;
  MarginReport margins;
  SimTrace trace;
  std::optional<std::string> trace_file;
};

struct ComparisonReport {
  std::string scenario;
  std::vector<MethodResult> rows;  // in request order
};

/// Simulates and scores every requested method. Runs are independent and
/// execute concurrently; rows come back in request order.
ComparisonReport run_comparison(const ScenarioSpec& spec,
                                const std::vector<TuningMethod>& methods);

/// Single-method run of `spec.method` (or the explicit params).
MethodResult run_single(const ScenarioSpec& spec);

struct SweepPoint {
  double value;
  ControllerParams params;
  bool td_sign_flipped;
  StepSpecs step;
  OscillationSummary oscillation;
  SimTrace trace;
};

struct SweepReport {
  std::string scenario;
  SweepParameter parameter;
  std::vector<SweepPoint> points;
  /// Only set when there are at least two points.
  std::optional<bool> settling_strictly_increasing;
  std::optional<bool> oscillation_strictly_decreasing;
};

/// One tuned design and simulation per swept value of the design spec.
SweepReport run_sweep(const ScenarioSpec& spec);

}  // namespace ipdt
