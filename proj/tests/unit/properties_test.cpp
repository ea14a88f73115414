#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "ipdt/errors.hpp"
#include "ipdt/freq.hpp"
#include "ipdt/io.hpp"
#include "ipdt/metrics.hpp"
#include "ipdt/sim.hpp"
#include "ipdt/tuning.hpp"
#include "oracles.hpp"

using namespace ipdt;
using std::numbers::pi;

namespace {

Scenario step_scenario(double sp, double horizon, double dt) {
  return Scenario(SignalProfile::constant(sp), SignalProfile::constant(0.0), horizon, dt, false);
}

}  // namespace

TEST(Property, MarginIdentitiesHoldForRandomDesigns) {
  oracle::Gen gen(20240601);
  int accepted = 0;
  int drawn = 0;
  while (accepted < 100) {
    ASSERT_LT(++drawn, 10000);
    const double kp = gen.log_uniform(0.005, 5.0);
    const double d = gen.uniform(0.5, 20.0);
    const DesignSpec spec(gen.uniform(1.2, 4.0), gen.uniform(0.5, pi), gen.uniform(20.0, 100.0));
    TuneReport rep{ControllerParams::proportional(1.0), {}, spec, false};
    try {
      rep = tune_pd(IpdtModel(kp, d), spec);
    } catch (const DegenerateSpecError&) {
      continue;
    }
    if (rep.td_sign_flipped) continue;
    ++accepted;
    const IpdtModel model(kp, d);
    const double w_pc = rep.crossovers.w_pc;
    const double w_gc = rep.crossovers.w_gc;
    EXPECT_NEAR(std::abs(loop_response(model, rep.params, w_pc)) * spec.gain_margin(), 1.0, 1e-9);
    // The tangent fixes the phase up to a multiple of pi.
    const double excess = unwrapped_loop_phase(model, rep.params, w_gc) + pi - spec.phase_margin();
    EXPECT_NEAR(std::remainder(excess, pi), 0.0, 1e-9);
  }
}

TEST(Property, GainScalesInverselyWithProcessGain) {
  oracle::Gen gen(7);
  for (int i = 0; i < 50; ++i) {
    const double kp = gen.log_uniform(0.01, 10.0);
    const double d = gen.uniform(0.1, 10.0);
    const double s = gen.log_uniform(0.1, 10.0);
    const DesignSpec spec(gen.uniform(1.2, 4.0), gen.uniform(0.5, pi), gen.uniform(20.0, 100.0));
    try {
      const auto a = tune_pd(IpdtModel(kp, d), spec);
      const auto b = tune_pd(IpdtModel(kp * s, d), spec);
      EXPECT_NEAR(a.params.kc() / b.params.kc(), s, 1e-12 * s);
      EXPECT_EQ(a.params.derivative_time(), b.params.derivative_time());
    } catch (const DegenerateSpecError&) {
    }
  }
}

TEST(Property, ClosedLoopIsLinearInSetpoint) {
  oracle::Gen gen(11);
  for (int i = 0; i < 10; ++i) {
    const double dt = 0.01;
    const IpdtModel model(gen.log_uniform(0.01, 0.2), dt * gen.integer(10, 800));
    const ControllerParams params(gen.uniform(0.2, 2.0) / model.kp() / model.dead_time() * 0.5,
                                  gen.coin() ? std::optional<double>(gen.uniform(10.0, 60.0))
                                             : std::nullopt,
                                  gen.uniform(0.0, 3.0), "");
    const double a = gen.uniform(-5.0, 5.0);
    const auto unit = simulate(model, params, step_scenario(1.0, 30.0, dt));
    const auto scaled = simulate(model, params, step_scenario(a, 30.0, dt));
    for (std::size_t k = 0; k < unit.size(); ++k) {
      ASSERT_NEAR(scaled.y[k], a * unit.y[k], 1e-9 * (1.0 + std::abs(a * unit.y[k])));
      ASSERT_NEAR(scaled.u[k], a * unit.u[k], 1e-9 * (1.0 + std::abs(a * unit.u[k])));
    }
  }
}

TEST(Property, OutputUntouchedDuringDeadTime) {
  oracle::Gen gen(13);
  for (int i = 0; i < 25; ++i) {
    const double dt = 0.01 * gen.integer(1, 5);
    const int n = gen.integer(10, 400);
    const IpdtModel model(gen.log_uniform(0.01, 2.0), dt * n);
    const ControllerParams params = ControllerParams::pd(gen.uniform(0.01, 3.0), gen.uniform(0, 2));
    const auto tr =
        simulate(model, params, step_scenario(gen.uniform(0.1, 4.0), dt * (n + 5), dt));
    for (int k = 0; k <= n; ++k) ASSERT_EQ(tr.y[static_cast<std::size_t>(k)], 0.0);
    ASSERT_NE(tr.y[static_cast<std::size_t>(n) + 1], 0.0);
  }
}

TEST(Property, IntegratorIsExactOnDyadicInputs) {
  oracle::Gen gen(17);
  for (int i = 0; i < 25; ++i) {
    const double kp = std::ldexp(1.0, gen.integer(-3, 3));
    const double dt = std::ldexp(1.0, -gen.integer(2, 6));
    const int delay = gen.integer(0, 12);
    IpdtStepper plant(IpdtModel(kp, dt * delay), dt);
    std::vector<double> inputs;
    double expected = 0.0;
    for (int k = 0; k < 60; ++k) {
      const double v = std::ldexp(static_cast<double>(gen.integer(-64, 64)), -4);
      inputs.push_back(v);
      plant.advance(v);
      if (k >= delay) expected += kp * dt * inputs[static_cast<std::size_t>(k - delay)];
      ASSERT_EQ(plant.output(), expected);
    }
  }
}

TEST(Property, ObserverFollowsRecurrence) {
  oracle::Gen gen(19);
  for (int i = 0; i < 8; ++i) {
    const double dt = 0.01;
    const int n = gen.integer(50, 600);
    const IpdtModel model(gen.log_uniform(0.02, 0.1), dt * n);
    const double gain = gen.uniform(0.1, 1.2) / (model.kp() * model.dead_time());
    const double onset = dt * gen.integer(0, 2000);
    const double mag = gen.uniform(-2.0, 2.0);
    const Scenario sc(SignalProfile::constant(gen.uniform(-1.0, 1.0)),
                      onset == 0.0 ? SignalProfile::constant(mag)
                                   : SignalProfile({{0.0, 0.0}, {onset, mag}}),
                      60.0, dt, true);
    SimOptions opts;
    opts.observer_gain = gain;
    const auto params = ControllerParams::pd(0.3 / (model.kp() * model.dead_time()), 0.5);
    const auto tr = simulate(model, params, sc, opts);
    const auto want = oracle::observer_recurrence(tr.d, gain, model.kp(), dt,
                                                  static_cast<std::size_t>(n));
    double sq = 0.0;
    for (std::size_t k = 0; k < tr.size(); ++k) sq += std::pow(tr.d_hat[k] - want[k], 2);
    EXPECT_LT(std::sqrt(sq / static_cast<double>(tr.size())), 1e-6);
  }
}

TEST(Property, IndexInequalities) {
  oracle::Gen gen(23);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(2, 400));
    SimTrace tr = SimTrace::zeros(gen.uniform(0.001, 0.5), n);
    for (std::size_t k = 0; k < n; ++k) {
      tr.sp[k] = gen.uniform(-3.0, 3.0);
      tr.y[k] = gen.uniform(-3.0, 3.0);
      tr.u[k] = gen.uniform(-10.0, 10.0);
    }
    const Window w{0.0, tr.end_time()};
    const auto idx = index_report(tr, w);
    const double T = tr.end_time();
    EXPECT_GE(idx.ise, 0.0);
    EXPECT_GE(idx.iae, 0.0);
    EXPECT_GE(idx.itae, 0.0);
    EXPECT_LE(idx.itae, T * idx.iae * (1.0 + 1e-12));
    EXPECT_GE(idx.energy, 0.0);
    // Cauchy-Schwarz for the trapezoid rule with non-negative weights.
    EXPECT_LE(idx.iae * idx.iae, T * idx.ise * (1.0 + 1e-12) + 1e-300);
  }
}

TEST(Property, ConstantErrorIntegratesExactly) {
  oracle::Gen gen(29);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(2, 1000));
    SimTrace tr = SimTrace::zeros(0.125, n);
    const double c = gen.uniform(-4.0, 4.0);
    for (auto& s : tr.sp) s = c;
    const double T = tr.end_time();
    const auto idx = integral_indices(tr, {0.0, T}, 0.0);
    EXPECT_NEAR(idx.ise, c * c * T, 1e-12 * c * c * T);
    EXPECT_NEAR(idx.iae, std::abs(c) * T, 1e-12 * std::abs(c) * T);
    EXPECT_NEAR(idx.itae, std::abs(c) * T * T / 2.0, 1e-12 * std::abs(c) * T * T);
  }
}

TEST(Property, TraceCsvRoundTrip) {
  oracle::Gen gen(31);
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(2, 200));
    SimTrace tr = SimTrace::zeros(gen.log_uniform(1e-4, 1.0), n);
    for (std::size_t k = 0; k < n; ++k) {
      tr.sp[k] = gen.uniform(-1e3, 1e3);
      tr.y[k] = gen.log_uniform(1e-200, 1e200) * (gen.coin() ? 1 : -1);
      tr.u[k] = gen.uniform(-1.0, 1.0);
      tr.d[k] = gen.coin() ? 0.0 : gen.uniform(-5.0, 5.0);
      tr.d_hat[k] = gen.uniform(-5.0, 5.0);
    }
    std::istringstream in(trace_to_csv(tr));
    const SimTrace back = parse_trace_csv(in);
    EXPECT_TRUE(back == tr);
  }
}

TEST(Property, ScenarioFileRoundTrip) {
  oracle::Gen gen(37);
  for (int i = 0; i < 40; ++i) {
    ScenarioSpec spec;
    spec.name = "random_" + std::to_string(i);
    spec.plant = IpdtModel(gen.log_uniform(0.001, 10.0), gen.uniform(0.0, 20.0));
    spec.method = kAllMethods[static_cast<std::size_t>(gen.integer(0, 3))];
    if (gen.coin()) {
      spec.params = ControllerParams(gen.uniform(0.1, 5.0),
                                     gen.coin() ? std::optional<double>(gen.uniform(1, 50))
                                                : std::nullopt,
                                     gen.coin() ? std::optional<double>(gen.uniform(0, 5))
                                                : std::nullopt,
                                     "p" + std::to_string(i));
    }
    spec.design = DesignSpec(gen.uniform(1.0, 5.0), gen.uniform(0.1, pi), gen.uniform(5, 200));
    std::vector<Breakpoint> sp = {{0.0, gen.uniform(-3, 3)}};
    for (int j = 0, m = gen.integer(0, 4); j < m; ++j) {
      sp.push_back({sp.back().start_time + gen.uniform(0.5, 50.0), gen.uniform(-3, 3)});
    }
    spec.setpoint = SignalProfile(sp);
    spec.disturbance = gen.coin() ? SignalProfile::constant(0.0)
                                  : SignalProfile({{0.0, 0.0}, {gen.uniform(1, 99), 1.5}});
    spec.dt = 0.01 * gen.integer(1, 4);
    spec.horizon = spec.dt * gen.integer(100, 30000);
    spec.observer = static_cast<ObserverMode>(gen.integer(0, 2));
    if (gen.coin()) spec.observer_gain = gen.uniform(0.1, 4.0);
    spec.filter_n = gen.uniform(2.0, 50.0);
    spec.derivative_source = gen.coin() ? DerivativeSource::error : DerivativeSource::measurement;
    if (gen.coin()) {
      spec.sweep = gen.coin() ? SweepParameter::settling_time : SweepParameter::gain_margin;
      spec.sweep_values = {gen.uniform(1, 2), gen.uniform(2, 3), gen.uniform(3, 4)};
    }
    const ScenarioSpec back = parse_scenario(serialize_scenario(spec));
    EXPECT_TRUE(back == spec) << serialize_scenario(spec);
  }
}
