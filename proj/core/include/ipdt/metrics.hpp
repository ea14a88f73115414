#pragma once

#include <optional>
#include <vector>

#include "ipdt/types.hpp"

namespace ipdt {

struct Window {
  double t0;
  double t1;
};

struct IntegralIndices {
  double ise = 0.0;
  double iae = 0.0;
  double itae = 0.0;
};

struct IndexReport {
  double ise = 0.0;
  double iae = 0.0;
  double itae = 0.0;
  double energy = 0.0;
};

/// Trapezoidal ISE, IAE and ITAE of e = sp - y over the window. ITAE weights
/// by (t - time_origin).
IntegralIndices integral_indices(const SimTrace& trace, Window window, double time_origin);

/// Trapezoidal integral of u^2 over the window.
double control_energy(const SimTrace& trace, Window window);

/// ISE/IAE/ITAE plus control energy over the same window, origin at t0.
IndexReport index_report(const SimTrace& trace, Window window);

struct StepSpecs {
  std::optional<double> rise_time;      // 10% to 90% of the transition, s
  std::optional<double> settling_time;  // last exit from the 2% band, from step_time, s
  double overshoot = 0.0;               // percent of |final - initial|
  bool settled = false;
};

inline constexpr double kRiseLow = 0.1;
inline constexpr double kRiseHigh = 0.9;
inline constexpr double kSettlingBand = 0.02;

/// Time-domain step characteristics of y over [step_time, end]. Crossing
/// times are linearly interpolated between samples. `end` defaults to the
/// end of the trace.
StepSpecs step_specs(const SimTrace& trace, double step_time, double initial, double final,
                     std::optional<double> end = std::nullopt);

struct ServoSegment {
  Window window;
  double sp_value;
};

/// integral_indices on each segment with the ITAE origin reset to the
/// segment start. Segments must tile the trace span without gaps or overlap.
std::vector<IntegralIndices> servo_segment_indices(const SimTrace& trace,
                                                   const std::vector<ServoSegment>& segments);

/// Segments that follow the setpoint breakpoints of a trace's scenario.
std::vector<ServoSegment> segments_from_setpoint(const SignalProfile& setpoint, double horizon);

struct OscillationSummary {
  /// max(y) - min(y) from the first local peak onward; 0 for a response
  /// without an interior peak.
  double peak_to_peak_after_first_peak = 0.0;
  /// Alternating excursions beyond `final` larger than the threshold.
  int excursions = 0;
  /// excursions / 2 (an overshoot followed by an undershoot).
  int cycles = 0;
};

/// Excursions smaller than this fraction of |final - initial| are ignored.
inline constexpr double kOscillationThreshold = 1e-3;

OscillationSummary oscillation_summary(const SimTrace& trace, double initial, double final);

}  // namespace ipdt
