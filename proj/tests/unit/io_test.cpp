#include <gtest/gtest.h>

#include <filesystem>
#include <limits>
#include <numbers>
#include <sstream>

#include "ipdt/errors.hpp"
#include "ipdt/io.hpp"
#include "ipdt/tuning.hpp"

using namespace ipdt;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ipdt_io_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Numbers, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(std::numbers::pi), "3.141592653589793");
  for (double v : {1.5320836608359552, -2.5e-300, 6.02214076e23, 0.0}) {
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_EQ(parse_double("+2.5"), 2.5);
  EXPECT_THROW(parse_double("2.5x"), ValidationError);
  EXPECT_THROW(parse_double(""), ValidationError);
}

TEST(TraceCsv, HeaderAndFirstRow) {
  const auto tuned = tune_pd(canonical_plant(), DesignSpec(2.0, std::numbers::pi, 40.0));
  const Scenario sc(SignalProfile::constant(1.0), SignalProfile::constant(0.0), 1.0, 0.01, false);
  const auto tr = simulate(canonical_plant(), tuned.params, sc);
  std::istringstream in(trace_to_csv(tr));
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "t,sp,y,u,d,d_hat");
  EXPECT_EQ(first, "0,1,0," + format_double(tr.u[0]) + ",0,0");
}

TEST(TraceCsv, RoundTripIsExact) {
  const Scenario sc(SignalProfile({{0.0, 1.0}, {5.0, 3.0}}), SignalProfile({{0.0, 0.0}, {7.0, 1.0}}),
                    10.0, 0.01, true);
  const auto tr = simulate(canonical_plant(), baseline_params(TuningMethod::proposed_pd), sc);
  const fs::path path = scratch("trace.csv");
  export_trace(tr, path);
  const SimTrace back = import_trace(path);
  EXPECT_TRUE(back == tr);
  EXPECT_EQ(trace_to_csv(back), trace_to_csv(tr));
}

TEST(TraceCsv, RejectsMalformedInput) {
  std::istringstream bad_header("time,y\n0,0\n");
  EXPECT_THROW(parse_trace_csv(bad_header), ValidationError);
  std::istringstream short_row("t,sp,y,u,d,d_hat\n0,1,0\n");
  EXPECT_THROW(parse_trace_csv(short_row), ValidationError);
  std::istringstream empty("t,sp,y,u,d,d_hat\n");
  EXPECT_THROW(parse_trace_csv(empty), ValidationError);
  EXPECT_THROW(import_trace(scratch("does_not_exist.csv")), IoError);
}

TEST(ScenarioFile, BuiltinsRoundTrip) {
  for (BuiltinScenario s : kAllBuiltinScenarios) {
    const ScenarioSpec spec = builtin_scenario(s);
    const std::string text = serialize_scenario(spec);
    const ScenarioSpec back = parse_scenario(text);
    EXPECT_TRUE(back == spec) << scenario_name(s);
    EXPECT_EQ(serialize_scenario(back), text);
  }
}

TEST(ScenarioFile, ExplicitParamsAndObserverRoundTrip) {
  ScenarioSpec spec = builtin_scenario(BuiltinScenario::regulatory);
  spec.params = ControllerParams(2.0, 30.0, 0.5, "mine");
  spec.observer = ObserverMode::enabled;
  spec.observer_gain = 3.5;
  spec.derivative_source = DerivativeSource::measurement;
  spec.filter_n = 20.0;
  const fs::path path = scratch("scenario.cfg");
  save_scenario(spec, path);
  EXPECT_TRUE(load_scenario(path) == spec);
}

TEST(ScenarioFile, MinimalFileUsesDefaults) {
  const auto spec = parse_scenario(
      "schema = ipdt-scenario/1\nsetpoint = 0:1\nhorizon = 50\ndt = 0.01\n");
  EXPECT_EQ(spec.plant.kp(), 0.0506);
  EXPECT_EQ(spec.method, TuningMethod::proposed_pd);
  EXPECT_EQ(spec.horizon, 50.0);
  EXPECT_TRUE(spec.disturbance.is_identically_zero());
}

TEST(ScenarioFile, Rejections) {
  const std::string base = "schema = ipdt-scenario/1\nsetpoint = 0:1\nhorizon = 50\ndt = 0.01\n";
  EXPECT_THROW(parse_scenario("setpoint = 0:1\nhorizon = 1\ndt = 0.1\n"), ValidationError);
  EXPECT_THROW(parse_scenario("schema = ipdt-scenario/9\n"), ValidationError);
  EXPECT_THROW(parse_scenario(base + "colour = red\n"), ValidationError);
  EXPECT_THROW(parse_scenario(base + "dt = 0.02\n"), ValidationError);
  EXPECT_THROW(parse_scenario(base + "method = pid\n"), ValidationError);
  EXPECT_THROW(parse_scenario(base + "params.td = 1\n"), ValidationError);
  EXPECT_THROW(parse_scenario(base + "observer = maybe\n"), ValidationError);
  EXPECT_THROW(parse_scenario(base + "no equals sign\n"), ValidationError);
  EXPECT_THROW(parse_scenario("schema = ipdt-scenario/1\nsetpoint = 0:1\nhorizon = 1.005\n"
                              "dt = 0.01\n"),
               ValidationError);
  EXPECT_THROW(parse_scenario("schema = ipdt-scenario/1\nsetpoint = 1:1\nhorizon = 1\n"
                              "dt = 0.01\n"),
               ValidationError);
  EXPECT_THROW(load_scenario(scratch("missing.cfg")), IoError);
}
