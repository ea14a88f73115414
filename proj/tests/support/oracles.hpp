#pragma once

// Reference computations written independently of the library code paths.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "ipdt/types.hpp"

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

// Loop magnitude of kp/s e^{-ds} times an ideal PD, evaluated directly.
inline double pd_loop_magnitude(double kp, double kc, double td, double w) {
  return std::abs(kp) * kc * std::hypot(1.0, td * w) / w;
}

// Same loop's phase, continuous in w: integrator, lead, transport lag.
inline double pd_loop_phase(double kc_sign, double td, double d, double w) {
  const double base = -kPi / 2.0 + std::atan(td * w) - w * d;
  return kc_sign < 0.0 ? base + kPi : base;
}

// Derivative time written with the cotangent identity tan(x + pi/2) = -cot(x).
inline double pd_td_via_cot(double phi_m, double w_gc, double d) {
  const double x = phi_m + w_gc * d - kPi;
  return std::abs(std::cos(x) / std::sin(x)) / w_gc;
}

// Builds a trace whose output column is f(t) sampled on t = k dt.
template <class F>
ipdt::SimTrace trace_from(double dt, std::size_t n, double sp, F f) {
  ipdt::SimTrace tr = ipdt::SimTrace::zeros(dt, n);
  for (std::size_t k = 0; k < n; ++k) {
    tr.y[k] = f(tr.t[k]);
    tr.sp[k] = sp;
  }
  return tr;
}

// Closed forms for y = 1 - e^{-t} tracking a unit step from t = 0 to T.
inline double first_order_ise(double T) {
  // integral of e^{-2t}
  return 0.5 * (1.0 - std::exp(-2.0 * T));
}
inline double first_order_iae(double T) { return 1.0 - std::exp(-T); }
inline double first_order_itae(double T) {
  // integral of t e^{-t}
  return 1.0 - (1.0 + T) * std::exp(-T);
}

// Disturbance-estimate recurrence for a perfectly modeled integrating plant
// driven by zero-order-hold samples:
//   d_hat[k+1] = d_hat[k] + K kp dt (D[k-n] - d_hat[k-n]).
inline std::vector<double> observer_recurrence(const std::vector<double>& disturbance,
                                               double gain, double kp, double dt,
                                               std::size_t delay_samples) {
  std::vector<double> d_hat(disturbance.size(), 0.0);
  for (std::size_t k = 0; k + 1 < disturbance.size(); ++k) {
    double lagged = 0.0;
    if (k >= delay_samples) lagged = disturbance[k - delay_samples] - d_hat[k - delay_samples];
    d_hat[k + 1] = d_hat[k] + gain * kp * dt * lagged;
  }
  return d_hat;
}

// Seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
