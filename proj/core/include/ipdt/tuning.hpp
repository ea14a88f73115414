#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "ipdt/types.hpp"

namespace ipdt {

/// w_pc = 2 pi / ts, w_gc = 4 pi / ts.
CrossoverPair crossover_frequencies(double ts);

struct DerivativeTime {
  double td;
  bool sign_flipped;
};

/// Minimum distance (rad) between the tangent argument and a pole of tan.
inline constexpr double kTangentPoleGuard = 1e-9;

/// td = |tan(phi_m + w_gc d - pi/2)| / w_gc.
///
/// A negative tangent is folded to its magnitude and reported through
/// `sign_flipped`; the margin identities no longer hold exactly in that case.
/// Throws DegenerateSpecError when the argument lies within kTangentPoleGuard
/// of an odd multiple of pi/2.
DerivativeTime pd_derivative_time(double phi_m, double w_gc, double dead_time);

/// kc = w_pc / (kp am sqrt(1 + (td w_pc)^2)).
double pd_proportional_gain(double kp, double am, double w_pc, double td);

struct TuneReport {
  ControllerParams params;
  CrossoverPair crossovers;
  DesignSpec spec;
  bool td_sign_flipped;
};

inline constexpr std::string_view kProposedLabel = "proposed-pd";

/// Crossovers from the settling time, then td at w_gc, then kc at w_pc.
TuneReport tune_pd(const IpdtModel& model, const DesignSpec& spec);

enum class TuningMethod { wang_cluett, sree_chidambaram, ali_majhi, proposed_pd };

inline constexpr std::array<TuningMethod, 4> kAllMethods = {
    TuningMethod::wang_cluett, TuningMethod::sree_chidambaram, TuningMethod::ali_majhi,
    TuningMethod::proposed_pd};

std::string_view method_name(TuningMethod method);
std::optional<TuningMethod> parse_method(std::string_view name);

/// Published controller settings for the reference plant. Constants only;
/// none of these are recomputed from the originating design rules.
ControllerParams baseline_params(TuningMethod method);

/// Design knobs that produced a baseline row, kept as metadata
/// (e.g. "zeta=1, beta=3" for Wang-Cluett). Empty when there are none.
std::string_view baseline_design_notes(TuningMethod method);

}  // namespace ipdt
