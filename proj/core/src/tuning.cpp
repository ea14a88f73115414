#include "ipdt/tuning.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "ipdt/errors.hpp"

namespace ipdt {

using std::numbers::pi;

CrossoverPair crossover_frequencies(double ts) {
  if (!(std::isfinite(ts) && ts > 0.0)) {
    std::ostringstream os;
    os << "settling time must be > 0 (got " << ts << ")";
    throw ValidationError(os.str());
  }
  const double w_pc = 2.0 * pi / ts;
  return {w_pc, 2.0 * w_pc};
}

DerivativeTime pd_derivative_time(double phi_m, double w_gc, double dead_time) {
  if (!(std::isfinite(w_gc) && w_gc > 0.0)) {
    throw ValidationError("gain crossover frequency must be > 0");
  }
  if (!(std::isfinite(dead_time) && dead_time >= 0.0)) {
    throw ValidationError("dead time must be >= 0");
  }
  const double argument = phi_m + w_gc * dead_time - pi / 2.0;
  // Distance to the nearest odd multiple of pi/2.
  const double offset = std::remainder(argument - pi / 2.0, pi);
  if (std::abs(offset) < kTangentPoleGuard) {
    std::ostringstream os;
    os.precision(17);
    os << "degenerate specification: tangent argument " << argument
       << " rad is at a pole of tan (phi_m + w_gc*d - pi/2 = odd multiple of pi/2)";
    throw DegenerateSpecError(os.str(), argument);
  }
  const double raw = std::tan(argument);
  return {std::abs(raw) / w_gc, raw < 0.0};
}

double pd_proportional_gain(double kp, double am, double w_pc, double td) {
  if (!(std::isfinite(kp) && kp != 0.0)) throw ValidationError("process gain kp must be non-zero");
  if (!(std::isfinite(am) && am > 0.0)) throw ValidationError("gain margin must be > 0");
  if (!(std::isfinite(w_pc) && w_pc > 0.0)) {
    throw ValidationError("phase crossover frequency must be > 0");
  }
  if (!(std::isfinite(td) && td >= 0.0)) throw ValidationError("derivative time must be >= 0");
  const double lead = td * w_pc;
  return w_pc / (kp * am * std::sqrt(1.0 + lead * lead));
}

TuneReport tune_pd(const IpdtModel& model, const DesignSpec& spec) {
  const CrossoverPair crossovers = crossover_frequencies(spec.settling_time());
  const DerivativeTime td =
      pd_derivative_time(spec.phase_margin(), crossovers.w_gc, model.dead_time());
  const double kc =
      pd_proportional_gain(model.kp(), spec.gain_margin(), crossovers.w_pc, td.td);
  return TuneReport{ControllerParams::pd(kc, td.td, std::string(kProposedLabel)), crossovers,
                    spec, td.sign_flipped};
}

std::string_view method_name(TuningMethod method) {
  switch (method) {
    case TuningMethod::wang_cluett:
      return "wang-cluett";
    case TuningMethod::sree_chidambaram:
      return "sree-chidambaram";
    case TuningMethod::ali_majhi:
      return "ali-majhi";
    case TuningMethod::proposed_pd:
      return kProposedLabel;
  }
  return "unknown";
}

std::optional<TuningMethod> parse_method(std::string_view name) {
  for (TuningMethod m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  // Accept the underscore spellings too.
  if (name == "wang_cluett") return TuningMethod::wang_cluett;
  if (name == "sree_chidambaram") return TuningMethod::sree_chidambaram;
  if (name == "ali_majhi") return TuningMethod::ali_majhi;
  if (name == "proposed_pd") return TuningMethod::proposed_pd;
  return std::nullopt;
}

ControllerParams baseline_params(TuningMethod method) {
  const std::string label(method_name(method));
  switch (method) {
    case TuningMethod::wang_cluett:
      return ControllerParams(1.2416, 55.065, 1.028, label);
    case TuningMethod::sree_chidambaram:
      return ControllerParams(2.95, 15.0, 3.0, label);
    case TuningMethod::ali_majhi:
      return ControllerParams(3.39, 19.02, 2.94, label);
    case TuningMethod::proposed_pd:
      return ControllerParams::pd(1.5321, 1.0343, label);
  }
  throw ValidationError("unknown tuning method");
}

std::string_view baseline_design_notes(TuningMethod method) {
  if (method == TuningMethod::wang_cluett) return "zeta=1, beta=3";
  if (method == TuningMethod::proposed_pd) return "am=2, phi_m=pi, ts=40";
  return {};
}

}  // namespace ipdt
