#include "ipdt/types.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <sstream>

#include "ipdt/errors.hpp"

namespace ipdt {
namespace {

std::string describe(const char* what, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (got " << value << ")";
  return os.str();
}

void require(bool ok, const char* what, double value) {
  if (!ok) throw ValidationError(describe(what, value));
}

}  // namespace

IpdtModel::IpdtModel(double kp, double dead_time) : kp_(kp), dead_time_(dead_time) {
  require(std::isfinite(kp) && kp != 0.0, "process gain kp must be finite and non-zero", kp);
  require(std::isfinite(dead_time) && dead_time >= 0.0, "dead time must be finite and >= 0",
          dead_time);
}

IpdtModel canonical_plant() { return IpdtModel(0.0506, 6.0); }

ControllerParams::ControllerParams(double kc, std::optional<double> ti,
                                   std::optional<double> td, std::string label)
    : kc_(kc), ti_(ti), td_(td), label_(std::move(label)) {
  require(std::isfinite(kc) && kc > 0.0, "proportional gain kc must be > 0", kc);
  if (ti_) require(std::isfinite(*ti_) && *ti_ > 0.0, "integral time ti must be > 0", *ti_);
  if (td_) require(std::isfinite(*td_) && *td_ >= 0.0, "derivative time td must be >= 0", *td_);
}

ControllerParams ControllerParams::with_label(std::string label) const {
  ControllerParams copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

DesignSpec::DesignSpec(double gain_margin, double phase_margin, double settling_time)
    : am_(gain_margin), phi_m_(phase_margin), ts_(settling_time) {
  require(std::isfinite(gain_margin) && gain_margin > 0.0, "gain margin must be > 0",
          gain_margin);
  require(std::isfinite(phase_margin) && phase_margin > 0.0 &&
              phase_margin <= std::numbers::pi,
          "phase margin must lie in (0, pi] radians", phase_margin);
  require(std::isfinite(settling_time) && settling_time > 0.0, "settling time must be > 0",
          settling_time);
}

double gain_margin_from_db(double db) { return std::pow(10.0, db / 20.0); }
double gain_margin_to_db(double ratio) { return 20.0 * std::log10(ratio); }

SignalProfile::SignalProfile(std::vector<Breakpoint> breakpoints)
    : breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.empty()) throw ValidationError("signal profile needs at least one breakpoint");
  require(breakpoints_.front().start_time == 0.0, "first breakpoint must start at t = 0",
          breakpoints_.front().start_time);
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const auto& bp = breakpoints_[i];
    require(std::isfinite(bp.value), "breakpoint value must be finite", bp.value);
    require(std::isfinite(bp.start_time), "breakpoint time must be finite", bp.start_time);
    if (i > 0) {
      require(bp.start_time > breakpoints_[i - 1].start_time,
              "breakpoint start times must be strictly increasing", bp.start_time);
    }
  }
}

double SignalProfile::value_at(double t) const {
  // Last breakpoint with start_time <= t.
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t,
                             [](double lhs, const Breakpoint& bp) { return lhs < bp.start_time; });
  if (it == breakpoints_.begin()) return breakpoints_.front().value;
  return std::prev(it)->value;
}

bool SignalProfile::is_identically_zero() const noexcept {
  return std::all_of(breakpoints_.begin(), breakpoints_.end(),
                     [](const Breakpoint& bp) { return bp.value == 0.0; });
}

double profile_value(const SignalProfile& profile, double t) {
  require(t >= 0.0, "profile time must be >= 0", t);
  return profile.value_at(t);
}

Scenario::Scenario(SignalProfile setpoint, SignalProfile disturbance, double horizon, double dt,
                   bool dob_enabled)
    : setpoint_(std::move(setpoint)),
      disturbance_(std::move(disturbance)),
      horizon_(horizon),
      dt_(dt),
      dob_enabled_(dob_enabled),
      steps_(0) {
  require(std::isfinite(dt) && dt > 0.0, "step size dt must be > 0", dt);
  require(std::isfinite(horizon) && horizon > 0.0, "horizon must be > 0", horizon);
  const double ratio = horizon / dt;
  const double whole = std::round(ratio);
  require(whole >= 1.0 && std::abs(ratio - whole) <= 1e-9 * whole,
          "horizon must be a whole number of steps of dt", ratio);
  steps_ = static_cast<std::size_t>(whole);
}

SimTrace SimTrace::zeros(double dt, std::size_t n) {
  SimTrace trace;
  trace.dt = dt;
  trace.t.resize(n);
  for (std::size_t k = 0; k < n; ++k) trace.t[k] = static_cast<double>(k) * dt;
  trace.sp.assign(n, 0.0);
  trace.y.assign(n, 0.0);
  trace.u.assign(n, 0.0);
  trace.d.assign(n, 0.0);
  trace.d_hat.assign(n, 0.0);
  return trace;
}

void validate_trace(const SimTrace& trace) {
  const std::size_t n = trace.t.size();
  if (n == 0) throw ValidationError("trace must hold at least one sample");
  if (trace.sp.size() != n || trace.y.size() != n || trace.u.size() != n ||
      trace.d.size() != n || trace.d_hat.size() != n) {
    throw ValidationError("trace columns must all have the same length");
  }
  require(std::isfinite(trace.dt) && trace.dt > 0.0, "trace dt must be > 0", trace.dt);
  for (std::size_t k = 0; k < n; ++k) {
    if (trace.t[k] != static_cast<double>(k) * trace.dt) {
      throw ValidationError(describe("trace time column must equal k * dt at every sample",
                                     static_cast<double>(k)));
    }
  }
}

}  // namespace ipdt
