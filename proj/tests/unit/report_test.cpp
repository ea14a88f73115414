#include <gtest/gtest.h>

#include <algorithm>
#include <json.hpp>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ipdt/io.hpp"
#include "ipdt/report.hpp"

using namespace ipdt;
using nlohmann::json;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

ScenarioSpec short_step() {
  auto spec = builtin_scenario(BuiltinScenario::step_tracking);
  spec.horizon = 80.0;
  return spec;
}

}  // namespace

TEST(Formats, Names) {
  for (auto f : {ReportFormat::json, ReportFormat::csv, ReportFormat::table}) {
    EXPECT_EQ(parse_format(format_name(f)), f);
  }
  EXPECT_FALSE(parse_format("xml").has_value());
}

TEST(Tune, JsonCarriesParameters) {
  const auto model = canonical_plant();
  const auto rep = tune_pd(model, DesignSpec(2.0, std::numbers::pi, 40.0));
  const json j = json::parse(render_tune(rep, model, ReportFormat::json));
  EXPECT_EQ(j["params"]["kc"].get<double>(), rep.params.kc());
  EXPECT_TRUE(j["params"]["ti"].is_null());
  EXPECT_FALSE(j["td_sign_flipped"].get<bool>());
  EXPECT_NE(render_tune(rep, model, ReportFormat::table).find("kc = 1.5321"), std::string::npos);
}

TEST(Compare, CsvHasFourRows) {
  const auto report = run_comparison(short_step(), {kAllMethods.begin(), kAllMethods.end()});
  const auto rows = lines(render_comparison(report, ReportFormat::csv));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0].rfind("method,kc,ti,td,", 0), 0u);
  const auto columns = std::count(rows[0].begin(), rows[0].end(), ',');
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(std::count(rows[i].begin(), rows[i].end(), ','), columns) << rows[i];
  }
  EXPECT_EQ(rows[4].rfind("proposed-pd,", 0), 0u);
}

TEST(Compare, JsonIsByteStable) {
  const auto a = render_comparison(run_comparison(short_step(), {TuningMethod::proposed_pd,
                                                                 TuningMethod::ali_majhi}),
                                   ReportFormat::json);
  const auto b = render_comparison(run_comparison(short_step(), {TuningMethod::proposed_pd,
                                                                 TuningMethod::ali_majhi}),
                                   ReportFormat::json);
  EXPECT_EQ(a, b);
  const json j = json::parse(a);
  ASSERT_EQ(j["methods"].size(), 2u);
  EXPECT_EQ(j["methods"][0]["method"], "proposed-pd");
  EXPECT_TRUE(j["methods"][0]["step"]["settled"].get<bool>());
}

TEST(Margins, AllFormats) {
  const auto m = measure_margins(canonical_plant(), baseline_params(TuningMethod::wang_cluett));
  const json j = json::parse(render_margins(m, ReportFormat::json));
  EXPECT_EQ(j["am"].get<double>(), m.am);
  EXPECT_EQ(lines(render_margins(m, ReportFormat::csv)).size(), 2u);
  EXPECT_FALSE(render_margins(m, ReportFormat::table).empty());
}

TEST(Sweep, PlotDataColumns) {
  auto spec = builtin_scenario(BuiltinScenario::sweep_ts);
  spec.horizon = 20.0;
  spec.sweep_values = {40.0, 60.0};
  const auto rep = run_sweep(spec);
  const auto data = lines(sweep_plot_data(rep));
  EXPECT_EQ(data[0], "t,y@40,y@60");
  EXPECT_EQ(data.size(), 2002u);
  const auto script = sweep_plot_script(rep, "sweep_ts_plot.csv");
  EXPECT_NE(script.find("sweep_ts_plot.csv"), std::string::npos);
  const json j = json::parse(render_sweep(rep, ReportFormat::json));
  EXPECT_EQ(j["parameter"], "ts");
  EXPECT_EQ(j["points"].size(), 2u);
}
