#include "ipdt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "ipdt/errors.hpp"

namespace ipdt {

DelayLine::DelayLine(double delay, double dt) : delay_(delay) {
  if (!(std::isfinite(dt) && dt > 0.0)) throw ValidationError("delay line needs dt > 0");
  if (!(std::isfinite(delay) && delay >= 0.0)) throw ValidationError("delay must be >= 0");
  const double samples = delay / dt;
  const double rounded = std::round(samples);
  // Snap delays that are whole multiples of dt up to rounding noise.
  if (std::abs(samples - rounded) <= 1e-9 * std::max(1.0, rounded)) {
    whole_ = static_cast<std::size_t>(rounded);
    fraction_ = 0.0;
  } else {
    whole_ = static_cast<std::size_t>(std::floor(samples));
    fraction_ = samples - std::floor(samples);
  }
  ring_.assign(whole_ + 2, 0.0);
}

void DelayLine::push(double value) {
  head_ = (head_ + 1) % ring_.size();
  ring_[head_] = value;
}

double DelayLine::sample(std::size_t age) const {
  return ring_[(head_ + ring_.size() - age) % ring_.size()];
}

double DelayLine::read() const {
  const double newer = sample(whole_);
  if (fraction_ == 0.0) return newer;
  return (1.0 - fraction_) * newer + fraction_ * sample(whole_ + 1);
}

IpdtStepper::IpdtStepper(const IpdtModel& model, double dt)
    : model_(model), dt_(dt), delay_(model.dead_time(), dt) {}

void IpdtStepper::advance(double input) {
  delay_.push(input);
  y_ += model_.kp() * dt_ * delay_.read();
}

PidController::PidController(ControllerParams params, double dt, ControllerOptions options)
    : params_(std::move(params)), dt_(dt), options_(options) {
  if (!(std::isfinite(dt) && dt > 0.0)) throw ValidationError("controller needs dt > 0");
  if (!(std::isfinite(options.filter_n) && options.filter_n > 0.0)) {
    throw ValidationError("derivative filter N must be > 0");
  }
}

double PidController::step(double error, double measurement) {
  const double kc = params_.kc();
  if (params_.ti() && started_) {
    integral_ += 0.5 * dt_ * (error + previous_error_);
  }
  const double td = params_.derivative_time();
  const double source =
      options_.derivative_source == DerivativeSource::error ? error : -measurement;
  if (td > 0.0) {
    const double tf = td / options_.filter_n;
    derivative_ = (tf * derivative_ + td * (source - previous_source_)) / (tf + dt_);
  }
  previous_error_ = error;
  previous_source_ = source;
  started_ = true;

  double u = error + derivative_;
  if (params_.ti()) u += integral_ / *params_.ti();
  return kc * u;
}

DisturbanceObserver::DisturbanceObserver(const IpdtModel& model, double gain, double dt)
    : model_(model, dt), gain_(gain) {
  if (!std::isfinite(gain)) throw ValidationError("observer gain must be finite");
}

double DisturbanceObserver::step(double u_pd, double y) {
  const double d_hat = gain_ * (y - model_.output());
  model_.advance(u_pd);
  return d_hat;
}

namespace {

[[noreturn]] void diverged(std::size_t k, double t, const char* signal) {
  std::ostringstream os;
  os << "simulation diverged: " << signal << " became non-finite at step " << k << " (t = " << t
     << " s)";
  throw DivergenceError(os.str(), k);
}

}  // namespace

SimTrace simulate(const IpdtModel& model, const ControllerParams& params,
                  const Scenario& scenario, const SimOptions& options) {
  const double dt = scenario.dt();
  if (model.dead_time() > 0.0 && dt > model.dead_time() / 10.0 * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "step size dt = " << dt << " s is too coarse for dead time " << model.dead_time()
       << " s (need dt <= d/10)";
    throw ValidationError(os.str());
  }

  const std::size_t n = scenario.steps() + 1;
  SimTrace trace = SimTrace::zeros(dt, n);

  IpdtStepper plant(model, dt);
  PidController controller(params, dt, options.controller);
  std::optional<DisturbanceObserver> observer;
  if (scenario.dob_enabled()) {
    observer.emplace(options.observer_model.value_or(model),
                     options.observer_gain.value_or(params.kc()), dt);
  }

  for (std::size_t k = 0; k < n; ++k) {
    const double t = trace.t[k];
    // k * dt can land a hair below a breakpoint that sits on the grid.
    const double t_lookup = t + 1e-9 * dt;
    const double sp = scenario.setpoint().value_at(t_lookup);
    const double dist = scenario.disturbance().value_at(t_lookup);
    const double y = plant.output();
    if (!std::isfinite(y)) diverged(k, t, "plant output");

    const double u_pd = controller.step(sp - y, y);
    const double d_hat = observer ? observer->step(u_pd, y) : 0.0;
    const double u = u_pd - d_hat;
    if (!std::isfinite(u)) diverged(k, t, "control signal");

    trace.sp[k] = sp;
    trace.y[k] = y;
    trace.u[k] = u;
    trace.d[k] = dist;
    trace.d_hat[k] = d_hat;

    plant.advance(u + dist);
  }
  return trace;
}

}  // namespace ipdt
