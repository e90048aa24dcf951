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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cvepr/cli/commands.h"
#include "cvepr/cli/scenario.h"

namespace cvepr::cli {

namespace {

double parse_number(std::string s) {
  const auto trim = [](std::string& t) {
    t.erase(0, t.find_first_not_of(" \t"));
    t.erase(t.find_last_not_of(" \t") + 1);
  };
  trim(s);
  double scale = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    scale = std::numbers::pi;
    s.resize(s.size() - 2);
    trim(s);
    if (s.empty() || s == "+") s = "1";
    if (s == "-") s = "-1";
    if (s.back() == '*') s.pop_back();
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("grid: cannot read number '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw ConfigError("grid: cannot read number '" + s + "'");
  return v * scale;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= s.size(); ++k) {
    if (k == s.size() || s[k] == sep) {
      parts.push_back(s.substr(start, k - start));
      start = k + 1;
    }
  }
  return parts;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw ConfigError("grid: expected start:stop:count");
    const double start = parse_number(parts[0]);
    const double stop = parse_number(parts[1]);
    const double count = parse_number(parts[2]);
    if (count < 1 || count != std::floor(count) || count > 1e6) {
      throw ConfigError("grid: count must be a positive integer");
    }
    const auto n = static_cast<std::size_t>(count);
    std::vector<double> grid(n);
    for (std::size_t k = 0; k < n; ++k) {
      grid[k] = n == 1 ? start : start + (stop - start) * static_cast<double>(k) / (n - 1);
    }
    return grid;
  }
  std::vector<double> grid;
  for (const auto& p : split(spec, ',')) grid.push_back(parse_number(p));
  return grid;
}

const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names{"r",         "eta",        "common_phase",
                                              "differential_phase", "hwp_angle", "alpha"};
  return names;
}

ScenarioConfig with_parameter(ScenarioConfig config, const std::string& parameter, double value) {
  if (parameter == "r") {
    config.source.r = value;
  } else if (parameter == "eta") {
    config.source.efficiency = value;
  } else if (parameter == "alpha") {
    config.source.alpha = value;
  } else if (parameter == "common_phase") {
    config.noise.common_phase = value;
  } else if (parameter == "differential_phase") {
    config.noise.differential_phase = value;
  } else if (parameter == "hwp_angle") {
    auto it = std::find_if(config.chain.begin(), config.chain.end(),
                           [](const ElementSpec& e) { return e.kind == ElementKind::HalfWave; });
    if (it == config.chain.end()) throw ConfigError("sweep hwp_angle: chain has no 'hwp'");
    it->angle_deg = value;
  } else {
    throw ConfigError("unknown sweep parameter '" + parameter + "'");
  }
  return config;
}

CommandResult run_sweep(const ScenarioConfig& input, const std::string& parameter,
                        const std::vector<double>& grid, bool with_mc) {
  if (grid.empty()) throw ConfigError("sweep: empty grid");
  auto base = input;
  if (with_mc && !base.mc) base.mc = McConfig{};
  // Validate every point before computing any, so a bad grid emits nothing.
  std::vector<ScenarioConfig> points;
  for (double v : grid) {
    points.push_back(with_parameter(base, parameter, v));
    points.back().validate();
  }
  CommandResult res;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto result = run_scenario(points[k]);
    std::optional<CurrentMcReport> mc;
    if (with_mc) mc = run_scenario_mc(result, *points[k].mc);
    res.ok = res.ok && result.physical;
    res.rows.push_back(make_record(points[k], result, parameter, grid[k], mc));
  }
  return res;
}

}  // namespace cvepr::cli
