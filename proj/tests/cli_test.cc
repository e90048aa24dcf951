// Copyright 2026 The cvepr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gtest/gtest.h"

#include "cvepr/cli/commands.h"
#include "cvepr/cli/config.h"
#include "cvepr/cli/output.h"
#include "cvepr/cli/scenario.h"

using namespace cvepr;
using namespace cvepr::cli;

namespace {

constexpr double kPi = std::numbers::pi;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const Row& record(const CommandResult& r) {
  for (const auto& row : r.rows) {
    if (std::get<std::string>(row.at("kind")) == "result") return row;
  }
  throw std::runtime_error("no result row");
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cvepr_cli_test_" + name);
}

}  // namespace

TEST(Config, defaults_are_the_canonical_scenario) {
  const ScenarioConfig c;
  EXPECT_EQ(c.source.alpha, 100.0);
  EXPECT_EQ(c.source.r, 1.0);
  ASSERT_EQ(c.chain.size(), 3u);
  EXPECT_EQ(c.chain[1].angle_deg, 22.5);
  EXPECT_NO_THROW(c.validate());
  const auto parsed = parse_config("{}");
  EXPECT_EQ(parsed.chain.size(), 3u);
  EXPECT_FALSE(parsed.mc.has_value());
}

TEST(Config, full_document) {
  const auto c = parse_config(R"({
    "id": "lossy",
    "source": {"alpha": 40, "r": 0.5, "mode": "amp", "excess_noise": 0.1, "efficiency": 0.9},
    "chain": [{"type": "phase", "targets": ["idler"], "theta": 0.2},
              {"type": "qwp", "angle_deg": 0}, {"type": "hwp", "angle_deg": 22.5},
              {"type": "pbs", "extinction_rad": 0.01},
              {"type": "loss", "targets": ["c", "d"], "eta": 0.8}],
    "detection": "direct",
    "noise": {"common_phase_rms": 0.1},
    "electronic_noise": 3,
    "analysis_frequency": "2 MHz",
    "mc": {"samples": 5000, "seed": 9, "batch": 1000},
    "output": {"format": "json"}
  })");
  EXPECT_EQ(c.id, "lossy");
  EXPECT_EQ(c.source.pump_phase, PumpPhase::Amplification);
  EXPECT_EQ(c.chain.size(), 5u);
  EXPECT_EQ(c.chain[4].targets.size(), 2u);
  EXPECT_EQ(c.noise.common_phase_rms, 0.1);
  ASSERT_TRUE(c.mc);
  EXPECT_EQ(c.mc->seed, 9u);
  EXPECT_EQ(c.output.format, Format::Json);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, rejects_bad_documents) {
  EXPECT_THROW(parse_config("{"), ConfigError);
  EXPECT_THROW(parse_config(R"({"sourse": {}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"source": {"alpha": "big"}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"source": {"mode": "sideways"}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"chain": [{"type": "mirror"}]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"chain": [{"type": "qwp", "theta": 1}]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"detection": "eyes"})"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/cvepr.json"), ConfigError);
}

TEST(Config, validation_resolves_wiring_and_ranges) {
  const auto bad = [](const char* text) { return parse_config(text).validate(); };
  EXPECT_THROW(bad(R"({"chain": [{"type": "qwp"}]})"), ConfigError);  // no splitter
  EXPECT_THROW(bad(R"({"chain": [{"type": "pbs"}, {"type": "hwp"}]})"), ConfigError);
  EXPECT_THROW(bad(R"({"chain": [{"type": "pbs"}, {"type": "pbs"}]})"), ConfigError);
  EXPECT_THROW(bad(R"({"chain": [{"type": "loss", "targets": ["c"], "eta": 0.5},
                                 {"type": "pbs"}]})"),
               ConfigError);
  EXPECT_THROW(bad(R"({"chain": [{"type": "pbs"}, {"type": "loss", "targets": ["c"],
                                                  "eta": 1.5}]})"),
               ConfigError);
  EXPECT_THROW(bad(R"({"chain": [{"type": "phase", "targets": []}, {"type": "pbs"}]})"),
               ConfigError);
  EXPECT_THROW(bad(R"({"source": {"r": -1}})"), ConfigError);
  EXPECT_THROW(bad(R"({"source": {"alpha": 0}})"), ConfigError);
  EXPECT_THROW(bad(R"({"source": {"efficiency": 0}})"), ConfigError);
  EXPECT_THROW(bad(R"({"noise": {"common_phase_rms": -0.1}})"), ConfigError);
  // Homodyne needs no splitter and tolerates a dark source.
  EXPECT_NO_THROW(bad(R"({"detection": "homodyne_baseline", "chain": [],
                          "source": {"alpha": 0}})"));
}

TEST(Grid, ranges) {
  EXPECT_EQ(parse_grid("0:1:5"), (std::vector<double>{0, 0.25, 0.5, 0.75, 1}));
  EXPECT_EQ(parse_grid("3:9:1"), (std::vector<double>{3}));
  EXPECT_EQ(parse_grid("2, 1,3"), (std::vector<double>{2, 1, 3}));
}

TEST(Grid, pi_suffix_and_lists) {
  const auto g = parse_grid("0,0.5pi,pi,-pi,2*pi");
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g[1], kPi / 2);
  EXPECT_DOUBLE_EQ(g[2], kPi);
  EXPECT_DOUBLE_EQ(g[3], -kPi);
  EXPECT_DOUBLE_EQ(g[4], 2 * kPi);
  EXPECT_EQ(parse_grid("0:2pi:100").size(), 100u);
  EXPECT_DOUBLE_EQ(parse_grid("0:2pi:100").back(), 2 * kPi);
  EXPECT_THROW(parse_grid("1:2"), ConfigError);
  EXPECT_THROW(parse_grid("0:1:0"), ConfigError);
  EXPECT_THROW(parse_grid("0:1:2.5"), ConfigError);
  EXPECT_THROW(parse_grid("a,b"), ConfigError);
  EXPECT_THROW(parse_grid(""), ConfigError);
}

TEST(Output, csv_rounds_and_repeats_headers) {
  std::ostringstream s;
  RowWriter w(s, Format::Csv);
  w.write(Row("a").set("x", 1.0 / 3.0).set("ok", true).set("n", std::int64_t{7}));
  w.write(Row("a").set("x", 2.0).set("ok", false).set("n", std::int64_t{8}));
  w.write(Row("b").set("label", std::string("p,\"q\"")));
  EXPECT_EQ(s.str(),
            "schema_version,kind,x,ok,n\n"
            "cvepr/1,a,0.333333333333,true,7\n"
            "cvepr/1,a,2,false,8\n"
            "schema_version,kind,label\n"
            "cvepr/1,b,\"p,\"\"q\"\"\"\n");
}

TEST(Output, json_keeps_full_precision) {
  std::ostringstream s;
  RowWriter(s, Format::Json).write(Row("a").set("x", 1.0 / 3.0).set("bad", std::nan("")));
  EXPECT_EQ(s.str(),
            "{\"schema_version\":\"cvepr/1\",\"kind\":\"a\",\"x\":0.3333333333333333,"
            "\"bad\":null}\n");
  const Row r = Row("a").set("x", 1.0).set("x", 2.0);
  EXPECT_EQ(r.number("x"), 2.0);
  EXPECT_EQ(r.fields().size(), 3u);
  EXPECT_THROW(r.at("nope"), std::out_of_range);
}

TEST(GaussHermite, integrates_even_moments) {
  const auto [z, w] = gauss_hermite(kPhaseNoiseOrder);
  EXPECT_NEAR(w.sum(), 1.0, 1e-13);
  EXPECT_NEAR((w.array() * z.array().square()).sum(), 1.0, 1e-12);
  EXPECT_NEAR((w.array() * z.array().pow(4)).sum(), 3.0, 1e-11);
  // E cos(s z) = exp(-s^2 / 2).
  EXPECT_NEAR((w.array() * (0.7 * z.array()).cos()).sum(), std::exp(-0.245), 1e-13);
}

TEST(Scenario, record_fields_obey_alpha_squared_relations) {
  ScenarioConfig c;
  c.source = {.alpha = 60.0, .r = 0.4, .efficiency = 0.7};
  c.chain.push_back({.kind = ElementKind::Loss, .targets = {"c"}, .eta = 0.9});
  const auto res = run_scenario(c);
  const auto row = make_record(c, res, "none", 0.0);
  const double a2 = row.number("alpha_sq");
  EXPECT_NEAR(row.number("norm_plus"), row.number("i_plus_var") / a2, 1e-15);
  EXPECT_NEAR(row.number("norm_minus"), row.number("i_minus_var") / a2, 1e-15);
  EXPECT_NEAR(row.number("duan_total"), row.number("norm_plus") + row.number("norm_minus"),
              1e-15);
  EXPECT_EQ(std::get<std::string>(row.at("schema_version")), kSchemaVersion);
}

TEST(Scenario, canonical_values) {
  const auto res = run_scenario(ScenarioConfig{});
  EXPECT_NEAR(res.i_plus_var, 1353.3528323661271, 1e-9);
  EXPECT_NEAR(res.measured.total, 0.2706705664732254, 1e-12);
  EXPECT_NEAR(res.fixed.total, 0.2706705664732254, 1e-12);
  EXPECT_NEAR(res.alpha_sq, 1e4, 1e-8);
  EXPECT_TRUE(res.physical);
  EXPECT_TRUE(res.warnings.empty());
}

TEST(Scenario, electronic_noise_and_efficiency) {
  ScenarioConfig c;
  c.electronic_noise = 100.0;
  EXPECT_NEAR(run_scenario(c).i_plus_var, 1453.3528323661271, 1e-9);
  c.electronic_noise = 0.0;
  c.source.efficiency = 0.5;
  EXPECT_NEAR(run_scenario(c).measured.total, 1.1353352832366128, 1e-12);
}

TEST(Scenario, phase_drift_hits_homodyne_but_not_direct_detection) {
  ScenarioConfig direct;
  direct.noise.common_phase_rms = 0.3;
  const auto d = run_scenario(direct);
  EXPECT_NEAR(d.measured.total, 0.2706705664732254, 1e-10);

  ScenarioConfig homodyne = direct;
  homodyne.detection = DetectionScheme::HomodyneBaseline;
  homodyne.chain.clear();
  const auto h = run_scenario(homodyne);
  // <Var> over a Gaussian phase: cosh 2r - exp(-2 s^2) sinh 2r per combination.
  const double want = std::cosh(2.0) - std::exp(-2 * 0.09) * std::sinh(2.0);
  EXPECT_NEAR(h.measured.v_plus, want, 1e-9);
  EXPECT_GT(h.measured.total, d.measured.total);

  homodyne.noise.common_phase_rms = 0.0;
  EXPECT_NEAR(run_scenario(homodyne).measured.total, 0.2706705664732254, 1e-12);
}

TEST(Demo, examples) {
  const auto def = run_demo(ScenarioConfig{});
  EXPECT_TRUE(def.ok);
  EXPECT_NEAR(record(def).number("duan_total"), 0.270671, 5e-7);
  EXPECT_TRUE(std::get<bool>(record(def).at("entangled")));

  ScenarioConfig flat;
  flat.source.r = 0.0;
  const auto f = run_demo(flat);
  EXPECT_TRUE(f.ok);
  EXPECT_EQ(record(f).number("fixed_total"), 2.0);
  EXPECT_FALSE(std::get<bool>(record(f).at("entangled")));

  ScenarioConfig amp;
  amp.source.pump_phase = PumpPhase::Amplification;
  const auto a = run_demo(amp);
  EXPECT_TRUE(a.ok);
  EXPECT_FALSE(std::get<bool>(record(a).at("entangled")));
  EXPECT_TRUE(std::get<bool>(record(a).at("mirrored_entangled")));
}

TEST(Sweep, common_phase_is_flat) {
  const auto res = run_sweep(ScenarioConfig{}, "common_phase", parse_grid("0:2pi:100"));
  ASSERT_EQ(res.rows.size(), 100u);
  const double first = res.rows.front().number("duan_total");
  for (const auto& row : res.rows) EXPECT_NEAR(row.number("duan_total"), first, 1e-10);
}

TEST(Sweep, differential_phase_fixed_frame_values) {
  const auto res = run_sweep(ScenarioConfig{}, "differential_phase", {0.0, kPi / 2, kPi});
  const double want[] = {0.1353352832366127, 3.7621956910836314, 7.38905609893065};
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(res.rows[k].number("fixed_v_plus"), want[k], 1e-9);
    EXPECT_EQ(res.rows[k].number("value"), (std::vector<double>{0.0, kPi / 2, kPi}[k]));
  }
}

TEST(Sweep, half_wave_misalignment_minimum_at_design_angle) {
  const auto grid = parse_grid("21.5:23.5:21");
  const auto res = run_sweep(ScenarioConfig{}, "hwp_angle", grid);
  std::size_t best = 0;
  for (std::size_t k = 1; k < res.rows.size(); ++k) {
    if (res.rows[k].number("duan_total") < res.rows[best].number("duan_total")) best = k;
  }
  EXPECT_DOUBLE_EQ(grid[best], 22.5);
  // Smooth: no jumps between neighbouring points.
  for (std::size_t k = 1; k < res.rows.size(); ++k) {
    EXPECT_LT(std::abs(res.rows[k].number("duan_total") - res.rows[k - 1].number("duan_total")),
              0.01);
  }
}

TEST(Sweep, parameters_and_errors) {
  const auto r = run_sweep(ScenarioConfig{}, "r", {0.0, 1.0, 2.0});
  EXPECT_NEAR(r.rows[2].number("duan_total"), 2 * std::exp(-4.0), 1e-10);
  const auto a = run_sweep(ScenarioConfig{}, "alpha", {50.0, 200.0});
  EXPECT_NEAR(a.rows[1].number("alpha_sq"), 4e4, 1e-7);
  const auto e = run_sweep(ScenarioConfig{}, "eta", {0.5});
  EXPECT_NEAR(e.rows[0].number("duan_total"), 1.1353352832366128, 1e-12);
  EXPECT_THROW(run_sweep(ScenarioConfig{}, "temperature", {1.0}), ConfigError);
  EXPECT_THROW(run_sweep(ScenarioConfig{}, "r", {}), ConfigError);
  EXPECT_THROW(run_sweep(ScenarioConfig{}, "eta", {0.5, 1.5}), ConfigError);
  ScenarioConfig plateless;
  plateless.chain = {{.kind = ElementKind::Pbs}};
  EXPECT_THROW(run_sweep(plateless, "hwp_angle", {22.5}), ConfigError);
}

TEST(Validate, clean_suite_passes_and_negative_control_fails) {
  const auto ok = run_validate(ScenarioConfig{});
  EXPECT_TRUE(ok.ok);
  for (const auto& row : ok.rows) {
    EXPECT_TRUE(std::get<bool>(row.at("pass"))) << std::get<std::string>(row.at("name"));
  }
  const auto bad = run_validate(ScenarioConfig{}, {.inject_asymmetry = 1e-6});
  EXPECT_FALSE(bad.ok);
  int failed = 0;
  for (const auto& row : bad.rows) failed += !std::get<bool>(row.at("pass"));
  EXPECT_EQ(failed, 1);
}

TEST(Cli, exit_codes) {
  EXPECT_EQ(invoke({"demo"}).code, kExitOk);
  EXPECT_EQ(invoke({"validate", "--inject-asymmetry", "1e-6"}).code, kExitInvariant);
  EXPECT_EQ(invoke({}).code, kExitConfig);
  EXPECT_EQ(invoke({"fly"}).code, kExitConfig);
  EXPECT_EQ(invoke({"demo", "--mode", "up"}).code, kExitConfig);
  EXPECT_EQ(invoke({"demo", "--r", "-2"}).code, kExitConfig);
  EXPECT_EQ(invoke({"demo", "--eta", "1.2"}).code, kExitConfig);
  EXPECT_EQ(invoke({"sweep", "--param", "r"}).code, kExitConfig);
  EXPECT_EQ(invoke({"sweep", "--param", "r", "--grid", "0:1"}).code, kExitConfig);
  EXPECT_EQ(invoke({"demo", "--config", "/nonexistent.json"}).code, kExitConfig);
  const auto help = invoke({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("sweep"), std::string::npos);
}

TEST(Cli, flags_override_config_file) {
  const auto path = temp_file("config.json");
  {
    std::ofstream f(path);
    f << R"({"source": {"alpha": 10, "r": 0.5}, "output": {"format": "json"}})";
  }
  const auto from_file = invoke({"demo", "--config", path.string()});
  ASSERT_EQ(from_file.code, kExitOk);
  EXPECT_NE(from_file.out.find("\"alpha\":10.0"), std::string::npos);
  const auto overridden = invoke({"demo", "--config", path.string(), "--alpha", "20", "--format",
                               "csv"});
  ASSERT_EQ(overridden.code, kExitOk);
  EXPECT_EQ(overridden.out.find('{'), std::string::npos);
  EXPECT_NE(overridden.out.find(",20,0.5,"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, writes_out_file) {
  const auto path = temp_file("out.csv");
  const auto run = invoke({"sweep", "--param", "r", "--grid", "0,1", "--out", path.string()});
  ASSERT_EQ(run.code, kExitOk);
  EXPECT_TRUE(run.out.empty());
  std::ifstream f(path);
  std::stringstream text;
  text << f.rdbuf();
  EXPECT_EQ(text.str(), invoke({"sweep", "--param", "r", "--grid", "0,1"}).out);
  std::filesystem::remove(path);
}

TEST(Cli, byte_identical_reruns) {
  const std::vector<std::vector<std::string>> commands = {
      {"demo", "--format", "json"},
      {"sweep", "--param", "common_phase", "--grid", "0:2pi:7"},
      {"validate"},
      {"mc", "--samples", "20000", "--seed", "5", "--format", "json"},
  };
  for (const auto& c : commands) {
    const auto a = invoke(c);
    const auto b = invoke(c);
    EXPECT_EQ(a.code, kExitOk) << c[0];
    EXPECT_FALSE(a.out.empty());
    EXPECT_EQ(a.out, b.out) << c[0];
  }
}

TEST(Cli, mc_seed_changes_output) {
  const auto a = invoke({"mc", "--samples", "20000", "--seed", "5"});
  const auto b = invoke({"mc", "--samples", "20000", "--seed", "6"});
  EXPECT_NE(a.out, b.out);
}
