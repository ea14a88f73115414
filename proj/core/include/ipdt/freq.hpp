#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "ipdt/types.hpp"

namespace ipdt {

/// G_C(jw) * G_I(jw) for the ideal parallel controller and the IPDT plant.
/// Throws ValidationError for w <= 0.
std::complex<double> loop_response(const IpdtModel& model, const ControllerParams& params,
                                   double w);

/// Continuous phase of the loop response, assembled from its factors: the
/// controller lead/lag (atan, within (-pi/2, pi/2)), the integrator (-pi/2),
/// the delay (-w d) and pi for a negative loop gain. Agrees with
/// arg(loop_response) modulo 2 pi.
double unwrapped_loop_phase(const IpdtModel& model, const ControllerParams& params, double w);

struct FrequencyPoint {
  double w;
  double magnitude;
  double phase;  // unwrapped, rad
};

/// Log-spaced samples of magnitude and unwrapped phase over [w_min, w_max].
std::vector<FrequencyPoint> frequency_grid(const IpdtModel& model,
                                           const ControllerParams& params, double w_min,
                                           double w_max, std::size_t points);

struct MarginReport {
  double am = 0.0;     // linear, 1 / |G(j w_pc)|
  double w_pc = 0.0;   // rad/s
  double phi_m = 0.0;  // rad, unwrapped arg G(j w_gc) + pi; negative when unstable
  double w_gc = 0.0;   // rad/s
  bool phase_crossover_found = false;
  bool gain_crossover_found = false;
  /// Crossings seen on the scan grid. More than one gain crossover means the
  /// reported phase margin is ambiguous.
  std::size_t phase_crossover_count = 0;
  std::size_t gain_crossover_count = 0;
  int pc_iterations = 0;
  int gc_iterations = 0;
};

struct MarginOptions {
  double w_min = 1e-4;
  double w_max = 1e3;
  std::size_t grid_points = 4000;
  double relative_tolerance = 1e-10;
  int max_iterations = 60;
};

/// Scans the grid for sign changes of (phase + pi) and of log|G|, bisects
/// each lowest-frequency bracket, and reports the classical margins there.
MarginReport measure_margins(const IpdtModel& model, const ControllerParams& params,
                             const MarginOptions& options = {});

}  // namespace ipdt
