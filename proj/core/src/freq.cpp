#include "ipdt/freq.hpp"

#include <cmath>
#include <algorithm>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>

#include "ipdt/errors.hpp"

namespace ipdt {
namespace {

using std::numbers::pi;

void require_positive_frequency(double w) {
  if (!(std::isfinite(w) && w > 0.0)) {
    throw ValidationError("frequency must be finite and > 0");
  }
}

// Imaginary part of the normalized controller, 1 + j(td w - 1/(ti w)).
double controller_lead(const ControllerParams& params, double w) {
  double lead = params.derivative_time() * w;
  if (params.ti()) lead -= 1.0 / (*params.ti() * w);
  return lead;
}

double loop_magnitude(const IpdtModel& model, const ControllerParams& params, double w) {
  return std::abs(model.kp()) * params.kc() * std::hypot(1.0, controller_lead(params, w)) / w;
}

struct Bisection {
  double w;
  int iterations;
};

// f(lo) and f(hi) have opposite signs (or one is zero).
Bisection bisect(const std::function<double(double)>& f, double lo, double hi,
                 const MarginOptions& options) {
  double f_lo = f(lo);
  int it = 0;
  while (it < options.max_iterations && (hi - lo) > options.relative_tolerance * lo) {
    const double mid = std::sqrt(lo * hi);
    const double f_mid = f(mid);
    ++it;
    if (f_mid == 0.0) return {mid, it};
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return {std::sqrt(lo * hi), it};
}

}  // namespace

std::complex<double> loop_response(const IpdtModel& model, const ControllerParams& params,
                                   double w) {
  require_positive_frequency(w);
  using namespace std::complex_literals;
  std::complex<double> controller = 1.0 + params.derivative_time() * w * 1i;
  if (params.ti()) controller += 1.0 / (*params.ti() * w * 1i);
  controller *= params.kc();
  const std::complex<double> plant = model.kp() / (w * 1i) * std::exp(-1i * w * model.dead_time());
  return controller * plant;
}

double unwrapped_loop_phase(const IpdtModel& model, const ControllerParams& params, double w) {
  require_positive_frequency(w);
  double phase = std::atan(controller_lead(params, w)) - pi / 2.0 - w * model.dead_time();
  if (model.kp() < 0.0) phase += pi;
  return phase;
}

std::vector<FrequencyPoint> frequency_grid(const IpdtModel& model,
                                           const ControllerParams& params, double w_min,
                                           double w_max, std::size_t points) {
  require_positive_frequency(w_min);
  if (!(w_max > w_min)) throw ValidationError("frequency grid needs w_min < w_max");
  if (points < 2) throw ValidationError("frequency grid needs at least two points");
  std::vector<FrequencyPoint> grid;
  grid.reserve(points);
  const double log_lo = std::log(w_min);
  const double log_step = (std::log(w_max) - log_lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    double w = std::exp(log_lo + log_step * static_cast<double>(i));
    if (i == 0) w = w_min;
    if (i + 1 == points) w = w_max;
    grid.push_back({w, loop_magnitude(model, params, w), unwrapped_loop_phase(model, params, w)});
  }
  return grid;
}

MarginReport measure_margins(const IpdtModel& model, const ControllerParams& params,
                             const MarginOptions& options) {
  if (options.grid_points < 2000) {
    throw ValidationError("margin scan needs at least 2000 grid points");
  }
  const auto grid =
      frequency_grid(model, params, options.w_min, options.w_max, options.grid_points);

  // The phase curve may sit above or below -pi by a multiple of 2 pi; a phase
  // crossover is any crossing of -pi - 2 pi m. Track the branch per bracket.
  auto phase_excess = [](double phase) { return phase + pi; };
  auto log_mag = [](double mag) { return std::log(mag); };

  MarginReport report;
  std::optional<std::pair<double, double>> pc_bracket;
  std::optional<double> pc_branch;
  std::optional<std::pair<double, double>> gc_bracket;

  for (std::size_t i = 1; i < grid.size(); ++i) {
    const auto& a = grid[i - 1];
    const auto& b = grid[i];
    // Phase: find integer m with -pi - 2 pi m between the two samples.
    const double lo_turn = std::floor(phase_excess(b.phase) / (2.0 * pi));
    const double hi_turn = std::floor(phase_excess(a.phase) / (2.0 * pi));
    if (lo_turn != hi_turn || phase_excess(a.phase) == 0.0) {
      const std::size_t crossings =
          static_cast<std::size_t>(std::abs(hi_turn - lo_turn)) + (lo_turn == hi_turn ? 1 : 0);
      report.phase_crossover_count += crossings;
      if (!pc_bracket) {
        pc_bracket = {a.w, b.w};
        pc_branch = 2.0 * pi * std::max(lo_turn, hi_turn);
      }
    }
    const double ga = log_mag(a.magnitude);
    const double gb = log_mag(b.magnitude);
    if ((ga > 0.0) != (gb > 0.0) || ga == 0.0) {
      ++report.gain_crossover_count;
      if (!gc_bracket) gc_bracket = {a.w, b.w};
    }
  }

  if (pc_bracket) {
    const double branch = *pc_branch;
    auto f = [&](double w) { return phase_excess(unwrapped_loop_phase(model, params, w)) - branch; };
    const Bisection root = bisect(f, pc_bracket->first, pc_bracket->second, options);
    report.phase_crossover_found = true;
    report.w_pc = root.w;
    report.pc_iterations = root.iterations;
    report.am = 1.0 / std::abs(loop_response(model, params, root.w));
  } else {
    report.am = std::numeric_limits<double>::infinity();
  }

  if (gc_bracket) {
    auto f = [&](double w) { return std::log(loop_magnitude(model, params, w)); };
    const Bisection root = bisect(f, gc_bracket->first, gc_bracket->second, options);
    report.gain_crossover_found = true;
    report.w_gc = root.w;
    report.gc_iterations = root.iterations;
    report.phi_m = unwrapped_loop_phase(model, params, root.w) + pi;
  } else {
    report.phi_m = std::numeric_limits<double>::infinity();
  }
  return report;
}

}  // namespace ipdt
