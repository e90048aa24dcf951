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

#ifndef CVEPR_CLI_COMMANDS_H
#define CVEPR_CLI_COMMANDS_H

#include <iosfwd>
#include <string>
#include <vector>

#include "cvepr/cli/config.h"
#include "cvepr/cli/output.h"

namespace cvepr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitConfig = 2;

struct CommandResult {
  std::vector<Row> rows;
  bool ok = true;  // every check passed
};

/// A named pass/fail row: kind "check" for demo identities, "invariant" for
/// the validation suite.
Row check_row(const std::string& kind, const std::string& name, double value, double tolerance,
              bool pass);

/// Canonical chain identities for the configured source, the photon-number
/// coefficient table, and the scenario record.
CommandResult run_demo(const ScenarioConfig& config);

/// Parses "start:stop:count" (inclusive, count >= 1) or a comma list. Any
/// number may carry a "pi" suffix ("0.5pi", "pi"). Throws ConfigError.
std::vector<double> parse_grid(const std::string& spec);

/// Names accepted by run_sweep.
const std::vector<std::string>& sweep_parameters();

/// Applies one swept value to a copy of the config. hwp_angle moves the
/// first half-wave plate (degrees); phases are in radians.
ScenarioConfig with_parameter(ScenarioConfig config, const std::string& parameter, double value);

CommandResult run_sweep(const ScenarioConfig& config, const std::string& parameter,
                        const std::vector<double>& grid, bool with_mc = false);

struct ValidateOptions {
  bool mc = false;
  /// Negative control: asymmetry added to the source covariance before the
  /// state is built.
  double inject_asymmetry = 0.0;
};

CommandResult run_validate(const ScenarioConfig& config, const ValidateOptions& options = {});

/// Oracle comparison for the scenario. Disagreement beyond 2% fails only
/// when the ports are bright enough for the linear expansion to apply.
CommandResult run_mc(const ScenarioConfig& config);

/// Full command line (argv[0] excluded). Writes records to `out` (or the
/// --out file) and diagnostics to `err`; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cvepr::cli

#endif  // CVEPR_CLI_COMMANDS_H
