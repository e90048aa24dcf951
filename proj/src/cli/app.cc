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

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "cvepr/cli/commands.h"

namespace cvepr::cli {

namespace {

// Flags shared by every subcommand; each overrides the config file.
struct Overrides {
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* r_opt = nullptr;
  CLI::Option* eta_opt = nullptr;
  CLI::Option* mode_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* samples_opt = nullptr;
  CLI::Option* format_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* config_opt = nullptr;
  double alpha = 0.0;
  double r = 0.0;
  double eta = 1.0;
  std::string mode;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::string format;
  std::string out;
  std::string config;

  void attach(CLI::App* app) {
    alpha_opt = app->add_option("--alpha", alpha, "mean amplitude of each beam");
    r_opt = app->add_option("--r", r, "two-mode squeezing parameter");
    eta_opt = app->add_option("--eta", eta, "source efficiency in (0, 1]");
    mode_opt = app->add_option("--mode", mode, "pump phase: deamp or amp")
                   ->check(CLI::IsMember({"deamp", "amp", "deamplification", "amplification"}));
    seed_opt = app->add_option("--seed", seed, "Monte Carlo seed");
    samples_opt = app->add_option("--samples", samples, "Monte Carlo samples");
    format_opt = app->add_option("--format", format, "csv or json")
                     ->check(CLI::IsMember({"csv", "json"}));
    out_opt = app->add_option("--out", out, "output file (default stdout)");
    config_opt = app->add_option("--config", config, "scenario config file (JSON)");
  }

  ScenarioConfig resolve() const {
    ScenarioConfig c = config_opt->count() ? load_config(config) : ScenarioConfig{};
    if (alpha_opt->count()) c.source.alpha = alpha;
    if (r_opt->count()) c.source.r = r;
    if (eta_opt->count()) c.source.efficiency = eta;
    if (mode_opt->count()) c.source.pump_phase = parse_mode(mode);
    if (seed_opt->count() || samples_opt->count()) {
      McConfig mc = c.mc.value_or(McConfig{});
      if (seed_opt->count()) mc.seed = seed;
      if (samples_opt->count()) mc.samples = samples;
      c.mc = mc;
    }
    if (format_opt->count()) c.output.format = parse_format(format);
    if (out_opt->count()) c.output.path = out;
    return c;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase-lock-free EPR measurement simulator", "cvepr"};
  app.require_subcommand(1);

  Overrides demo_o, sweep_o, validate_o, mc_o;
  auto* demo = app.add_subcommand("demo", "canonical chain identities and verdict");
  demo_o.attach(demo);

  auto* sweep = app.add_subcommand("sweep", "one record per grid point");
  sweep_o.attach(sweep);
  std::string parameter;
  std::string grid_spec;
  bool sweep_mc = false;
  sweep->add_option("--param", parameter, "swept parameter")
      ->required()
      ->check(CLI::IsMember(sweep_parameters()));
  sweep->add_option("--grid", grid_spec, "start:stop:count or a comma list; 'pi' suffix allowed")
      ->required();
  sweep->add_flag("--mc", sweep_mc, "add Monte Carlo fields to every record");

  auto* validate = app.add_subcommand("validate", "invariant suite");
  validate_o.attach(validate);
  ValidateOptions vopts;
  validate->add_flag("--mc", vopts.mc, "include the Monte Carlo oracle checks");
  validate->add_option("--inject-asymmetry", vopts.inject_asymmetry,
                       "negative control: perturb the source covariance");

  auto* mc = app.add_subcommand("mc", "Monte Carlo check of the current variances");
  mc_o.attach(mc);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    app.exit(e, err, err);
    return kExitConfig;
  }

  try {
    CommandResult result;
    ScenarioConfig config;
    if (demo->parsed()) {
      config = demo_o.resolve();
      result = run_demo(config);
    } else if (sweep->parsed()) {
      config = sweep_o.resolve();
      result = run_sweep(config, parameter, parse_grid(grid_spec), sweep_mc);
    } else if (validate->parsed()) {
      config = validate_o.resolve();
      result = run_validate(config, vopts);
    } else {
      config = mc_o.resolve();
      result = run_mc(config);
    }

    // Render fully before touching the destination: no partial files.
    std::ostringstream buffer;
    RowWriter(buffer, config.output.format).write(result.rows);
    if (config.output.path.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(config.output.path, std::ios::binary);
      if (!file) throw ConfigError("cannot open output file '" + config.output.path + "'");
      file << buffer.str();
      if (!file) throw ConfigError("failed writing '" + config.output.path + "'");
    }
    if (!result.ok) err << "cvepr: one or more checks failed\n";
    return result.ok ? kExitOk : kExitInvariant;
  } catch (const ConfigError& e) {
    err << "cvepr: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ModelError& e) {
    err << "cvepr: invalid input: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace cvepr::cli
