#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ipdt {

/// Integrating process with transport delay, G(s) = kp / s * exp(-d s).
class IpdtModel {
 public:
  /// Throws ValidationError if kp is zero or non-finite, or d is negative.
  IpdtModel(double kp, double dead_time);

  double kp() const noexcept { return kp_; }
  double dead_time() const noexcept { return dead_time_; }

  friend bool operator==(const IpdtModel&, const IpdtModel&) = default;

 private:
  double kp_;
  double dead_time_;
};

/// Reference plant used by every built-in scenario (kp = 0.0506, d = 6 s).
IpdtModel canonical_plant();

/// Ideal parallel PID, kc * (1 + 1/(ti s) + td s). PD when ti is absent.
class ControllerParams {
 public:
  ControllerParams(double kc, std::optional<double> ti, std::optional<double> td,
                   std::string label = {});

  static ControllerParams pd(double kc, double td, std::string label = {}) {
    return ControllerParams(kc, std::nullopt, td, std::move(label));
  }
  static ControllerParams proportional(double kc, std::string label = {}) {
    return ControllerParams(kc, std::nullopt, std::nullopt, std::move(label));
  }

  double kc() const noexcept { return kc_; }
  const std::optional<double>& ti() const noexcept { return ti_; }
  const std::optional<double>& td() const noexcept { return td_; }
  const std::string& label() const noexcept { return label_; }

  bool has_integral() const noexcept { return ti_.has_value(); }
  double derivative_time() const noexcept { return td_.value_or(0.0); }

  ControllerParams with_label(std::string label) const;

  friend bool operator==(const ControllerParams&, const ControllerParams&) = default;

 private:
  double kc_;
  std::optional<double> ti_;
  std::optional<double> td_;
  std::string label_;
};

/// Tuning inputs. Gain margin is a linear ratio, phase margin is in radians.
class DesignSpec {
 public:
  DesignSpec(double gain_margin, double phase_margin, double settling_time);

  double gain_margin() const noexcept { return am_; }
  double phase_margin() const noexcept { return phi_m_; }
  double settling_time() const noexcept { return ts_; }

  friend bool operator==(const DesignSpec&, const DesignSpec&) = default;

 private:
  double am_;
  double phi_m_;
  double ts_;
};

double gain_margin_from_db(double db);
double gain_margin_to_db(double ratio);
constexpr double degrees_to_radians(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double radians_to_degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Phase and gain crossover frequencies in rad/s.
struct CrossoverPair {
  double w_pc;
  double w_gc;
};

struct Breakpoint {
  double start_time;
  double value;

  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// Piecewise-constant, right-continuous signal. A breakpoint's value holds
/// from its start time (inclusive) until the next breakpoint.
class SignalProfile {
 public:
  /// Requires a first breakpoint at t = 0 and strictly increasing start times.
  explicit SignalProfile(std::vector<Breakpoint> breakpoints);

  static SignalProfile constant(double value) { return SignalProfile({{0.0, value}}); }

  double value_at(double t) const;
  const std::vector<Breakpoint>& breakpoints() const noexcept { return breakpoints_; }
  bool is_identically_zero() const noexcept;

  friend bool operator==(const SignalProfile&, const SignalProfile&) = default;

 private:
  std::vector<Breakpoint> breakpoints_;
};

double profile_value(const SignalProfile& profile, double t);

class Scenario {
 public:
  Scenario(SignalProfile setpoint, SignalProfile disturbance, double horizon, double dt,
           bool dob_enabled);

  const SignalProfile& setpoint() const noexcept { return setpoint_; }
  const SignalProfile& disturbance() const noexcept { return disturbance_; }
  double horizon() const noexcept { return horizon_; }
  double dt() const noexcept { return dt_; }
  bool dob_enabled() const noexcept { return dob_enabled_; }

  /// Number of integration steps; the trace holds steps() + 1 samples.
  std::size_t steps() const noexcept { return steps_; }

 private:
  SignalProfile setpoint_;
  SignalProfile disturbance_;
  double horizon_;
  double dt_;
  bool dob_enabled_;
  std::size_t steps_;
};

/// Uniformly sampled closed-loop record, t[k] = k * dt.
struct SimTrace {
  double dt = 0.0;
  std::vector<double> t;
  std::vector<double> sp;
  std::vector<double> y;
  std::vector<double> u;
  std::vector<double> d;
  std::vector<double> d_hat;

  std::size_t size() const noexcept { return t.size(); }
  double end_time() const noexcept { return t.empty() ? 0.0 : t.back(); }

  /// Builds an empty trace with n samples on the dt grid.
  static SimTrace zeros(double dt, std::size_t n);

  friend bool operator==(const SimTrace&, const SimTrace&) = default;
};

/// Throws ValidationError unless all columns have equal length >= 1 and
/// t[k] == k * dt.
void validate_trace(const SimTrace& trace);

}  // namespace ipdt
