#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ipdt/types.hpp"

namespace ipdt {

/// Fixed-rate transport delay. Holds past input samples spanning the delay
/// and reads the value from `delay` seconds before the most recent push,
/// interpolating linearly when the delay is not a whole number of samples.
/// Starts at rest: reads before the first `delay` seconds return 0.
class DelayLine {
 public:
  DelayLine(double delay, double dt);

  void push(double value);
  double read() const;

  double delay() const noexcept { return delay_; }
  std::size_t whole_samples() const noexcept { return whole_; }
  double fraction() const noexcept { return fraction_; }

 private:
  double sample(std::size_t age) const;

  double delay_;
  std::size_t whole_;
  double fraction_;
  std::vector<double> ring_;
  std::size_t head_ = 0;  // index of the newest sample
};

/// Integrator plus delay advanced with the zero-order-hold update
/// y <- y + kp * dt * input(t - d), which is exact for piecewise-constant input.
class IpdtStepper {
 public:
  IpdtStepper(const IpdtModel& model, double dt);

  double output() const noexcept { return y_; }
  /// Feeds the input held over the coming step and advances one step.
  void advance(double input);

 private:
  IpdtModel model_;
  double dt_;
  DelayLine delay_;
  double y_ = 0.0;
};

enum class DerivativeSource { error, measurement };

struct ControllerOptions {
  /// Derivative filter divisor; the filter time constant is td / N.
  double filter_n = 10.0;
  DerivativeSource derivative_source = DerivativeSource::error;
};

/// Discrete parallel PID: trapezoidal integral of the error, derivative
/// through a first-order filter (backward Euler). Starts from rest, so a
/// setpoint step at k = 0 produces a filtered derivative kick.
class PidController {
 public:
  PidController(ControllerParams params, double dt, ControllerOptions options = {});

  /// One sample. `measurement` only matters when the derivative acts on the
  /// measurement instead of the error.
  double step(double error, double measurement = 0.0);

  const ControllerParams& params() const noexcept { return params_; }
  double integral() const noexcept { return integral_; }
  double filtered_derivative() const noexcept { return derivative_; }

 private:
  ControllerParams params_;
  double dt_;
  ControllerOptions options_;
  double integral_ = 0.0;
  double derivative_ = 0.0;
  double previous_error_ = 0.0;
  double previous_source_ = 0.0;
  bool started_ = false;
};

/// Internal-model disturbance observer: a copy of the plant driven by the
/// controller output, with d_hat = gain * (y - y_model).
class DisturbanceObserver {
 public:
  DisturbanceObserver(const IpdtModel& model, double gain, double dt);

  /// Returns the estimate for the current sample from the measured output,
  /// then advances the internal model with the controller output `u_pd`.
  double step(double u_pd, double y);

  double model_output() const noexcept { return model_.output(); }
  double gain() const noexcept { return gain_; }

 private:
  IpdtStepper model_;
  double gain_;
};

struct SimOptions {
  ControllerOptions controller{};
  /// Observer gain; defaults to the controller's kc.
  std::optional<double> observer_gain;
  /// Observer's internal model; defaults to the plant (perfect modeling).
  std::optional<IpdtModel> observer_model;
};

/// Fixed-step closed loop. Per sample k: e = sp - y, u_pd from the controller,
/// u = u_pd - d_hat, plant input v = u + d, then plant and observer advance.
/// Requires dt <= d / 10 when d > 0. Throws DivergenceError on a non-finite
/// signal.
SimTrace simulate(const IpdtModel& model, const ControllerParams& params,
                  const Scenario& scenario, const SimOptions& options = {});

}  // namespace ipdt
