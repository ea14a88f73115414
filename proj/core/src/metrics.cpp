#include "ipdt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>

#include "ipdt/errors.hpp"

namespace ipdt {
namespace {

struct SampleRange {
  std::size_t first;
  std::size_t last;  // inclusive
};

// Samples whose time lies in [t0, t1], tolerating grid rounding.
SampleRange window_samples(const SimTrace& trace, Window window) {
  validate_trace(trace);
  const double eps = 1e-9 * trace.dt;
  if (!(window.t0 < window.t1)) {
    throw ValidationError("integration window needs t0 < t1");
  }
  if (window.t0 < -eps || window.t1 > trace.end_time() + eps) {
    std::ostringstream os;
    os << "window [" << window.t0 << ", " << window.t1 << "] lies outside the trace span [0, "
       << trace.end_time() << "]";
    throw ValidationError(os.str());
  }
  const auto lo = std::lower_bound(trace.t.begin(), trace.t.end(), window.t0 - eps);
  const auto hi = std::upper_bound(trace.t.begin(), trace.t.end(), window.t1 + eps);
  if (lo == trace.t.end() || hi == trace.t.begin() || lo >= hi) {
    throw ValidationError("integration window contains no samples");
  }
  return {static_cast<std::size_t>(lo - trace.t.begin()),
          static_cast<std::size_t>(hi - trace.t.begin()) - 1};
}

template <class F>
double trapezoid(const SimTrace& trace, SampleRange range, F&& f) {
  double sum = 0.0;
  for (std::size_t i = range.first; i < range.last; ++i) {
    sum += f(i) + f(i + 1);
  }
  return 0.5 * trace.dt * sum;
}

double crossing_time(const SimTrace& trace, std::size_t i, double p_prev, double p_next,
                     double level) {
  // Linear interpolation on [t[i-1], t[i]].
  const double span = p_next - p_prev;
  const double frac = span == 0.0 ? 1.0 : (level - p_prev) / span;
  return trace.t[i - 1] + std::clamp(frac, 0.0, 1.0) * trace.dt;
}

}  // namespace

IntegralIndices integral_indices(const SimTrace& trace, Window window, double time_origin) {
  const SampleRange r = window_samples(trace, window);
  auto err = [&](std::size_t i) { return trace.sp[i] - trace.y[i]; };
  IntegralIndices out;
  out.ise = trapezoid(trace, r, [&](std::size_t i) { return err(i) * err(i); });
  out.iae = trapezoid(trace, r, [&](std::size_t i) { return std::abs(err(i)); });
  out.itae = trapezoid(trace, r, [&](std::size_t i) {
    return (trace.t[i] - time_origin) * std::abs(err(i));
  });
  return out;
}

double control_energy(const SimTrace& trace, Window window) {
  const SampleRange r = window_samples(trace, window);
  return trapezoid(trace, r, [&](std::size_t i) { return trace.u[i] * trace.u[i]; });
}

IndexReport index_report(const SimTrace& trace, Window window) {
  const IntegralIndices idx = integral_indices(trace, window, window.t0);
  return {idx.ise, idx.iae, idx.itae, control_energy(trace, window)};
}

StepSpecs step_specs(const SimTrace& trace, double step_time, double initial, double final,
                     std::optional<double> end) {
  validate_trace(trace);
  if (final == initial) throw ValidationError("step_specs needs final != initial");
  const double t_end = end.value_or(trace.end_time());
  if (step_time < 0.0 || step_time >= t_end || t_end > trace.end_time() + 1e-9 * trace.dt) {
    throw ValidationError("step time must lie inside the trace span");
  }
  const SampleRange r = window_samples(trace, {step_time, t_end});
  const double delta = final - initial;
  auto progress = [&](std::size_t i) { return (trace.y[i] - initial) / delta; };

  StepSpecs specs;

  auto first_reach = [&](double level) -> std::optional<double> {
    for (std::size_t i = r.first; i <= r.last; ++i) {
      if (progress(i) >= level) {
        if (i == r.first) return trace.t[i];
        return crossing_time(trace, i, progress(i - 1), progress(i), level);
      }
    }
    return std::nullopt;
  };
  const auto t_low = first_reach(kRiseLow);
  const auto t_high = first_reach(kRiseHigh);
  if (t_low && t_high) specs.rise_time = *t_high - *t_low;

  double peak = progress(r.first);
  for (std::size_t i = r.first; i <= r.last; ++i) peak = std::max(peak, progress(i));
  specs.overshoot = 100.0 * std::max(0.0, peak - 1.0);

  // Last sample outside the band.
  std::optional<std::size_t> last_out;
  for (std::size_t i = r.last + 1; i-- > r.first;) {
    if (std::abs(progress(i) - 1.0) > kSettlingBand) {
      last_out = i;
      break;
    }
  }
  if (!last_out) {
    specs.settling_time = 0.0;
    specs.settled = true;
  } else if (*last_out < r.last) {
    const std::size_t j = *last_out;
    const double pj = progress(j);
    const double level = pj > 1.0 ? 1.0 + kSettlingBand : 1.0 - kSettlingBand;
    specs.settling_time = crossing_time(trace, j + 1, pj, progress(j + 1), level) - step_time;
    specs.settled = true;
  }
  return specs;
}

std::vector<IntegralIndices> servo_segment_indices(const SimTrace& trace,
                                                   const std::vector<ServoSegment>& segments) {
  validate_trace(trace);
  if (segments.empty()) throw ValidationError("servo analysis needs at least one segment");
  const double eps = 1e-9 * trace.dt;
  if (std::abs(segments.front().window.t0) > eps) {
    throw ValidationError("servo segments must start at t = 0");
  }
  for (std::size_t i = 1; i < segments.size(); ++i) {
    const double prev_end = segments[i - 1].window.t1;
    const double start = segments[i].window.t0;
    if (start < prev_end - eps) throw ValidationError("servo segments overlap");
    if (start > prev_end + eps) throw ValidationError("servo segments leave a gap");
  }
  if (std::abs(segments.back().window.t1 - trace.end_time()) > eps) {
    throw ValidationError("servo segments must end at the end of the trace");
  }
  std::vector<IntegralIndices> out;
  out.reserve(segments.size());
  for (const auto& seg : segments) {
    out.push_back(integral_indices(trace, seg.window, seg.window.t0));
  }
  return out;
}

std::vector<ServoSegment> segments_from_setpoint(const SignalProfile& setpoint, double horizon) {
  std::vector<ServoSegment> segments;
  const auto& bps = setpoint.breakpoints();
  for (std::size_t i = 0; i < bps.size(); ++i) {
    if (bps[i].start_time >= horizon) break;
    const double end = (i + 1 < bps.size()) ? std::min(bps[i + 1].start_time, horizon) : horizon;
    segments.push_back({{bps[i].start_time, end}, bps[i].value});
  }
  return segments;
}

OscillationSummary oscillation_summary(const SimTrace& trace, double initial, double final) {
  validate_trace(trace);
  if (final == initial) throw ValidationError("oscillation summary needs final != initial");
  const double delta = final - initial;
  const std::size_t n = trace.size();
  auto progress = [&](std::size_t i) { return (trace.y[i] - initial) / delta; };

  OscillationSummary out;

  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (progress(i) >= progress(i - 1) && progress(i) > progress(i + 1)) {
      const auto [lo, hi] = std::minmax_element(trace.y.begin() + static_cast<std::ptrdiff_t>(i),
                                                trace.y.end());
      out.peak_to_peak_after_first_peak = *hi - *lo;
      break;
    }
  }

  // Excursions about the final value, counted from the first time it is reached.
  std::size_t i = 0;
  while (i < n && progress(i) < 1.0) ++i;
  int sign = 0;
  double size = 0.0;
  auto close = [&] {
    if (sign != 0 && size > kOscillationThreshold) ++out.excursions;
  };
  for (; i < n; ++i) {
    const double dev = progress(i) - 1.0;
    const int s = dev > 0.0 ? 1 : (dev < 0.0 ? -1 : sign);
    if (s != sign) {
      close();
      sign = s;
      size = 0.0;
    }
    size = std::max(size, std::abs(dev));
  }
  close();
  out.cycles = out.excursions / 2;
  return out;
}

}  // namespace ipdt
