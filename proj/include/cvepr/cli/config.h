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

#ifndef CVEPR_CLI_CONFIG_H
#define CVEPR_CLI_CONFIG_H

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvepr/optics.h"
#include "cvepr/oracle.h"

namespace cvepr::cli {

/// Malformed or out-of-range configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ElementKind { QuarterWave, HalfWave, Phase, Loss, Pbs };

/// One optical element of a scenario chain. Which fields matter depends on
/// the kind: plates use angle_deg, phase uses targets + theta, loss uses
/// targets + eta, the beam splitter uses extinction.
struct ElementSpec {
  ElementKind kind = ElementKind::Pbs;
  double angle_deg = 0.0;
  std::vector<std::string> targets;
  double theta = 0.0;
  double eta = 1.0;
  double extinction = 0.0;
};

enum class DetectionScheme { Direct, HomodyneBaseline };
enum class Format { Csv, Json };

/// Static phase offsets applied right after the source, and the RMS of slow
/// Gaussian drift around them.
struct NoiseSpec {
  double common_phase = 0.0;
  double differential_phase = 0.0;
  double common_phase_rms = 0.0;
  double differential_phase_rms = 0.0;
};

struct OutputSpec {
  std::string path;  // empty: stdout
  Format format = Format::Csv;
};

struct ScenarioConfig {
  std::string id = "default";
  SourceSpec source{.alpha = 100.0, .r = 1.0};
  std::vector<ElementSpec> chain = default_chain();
  DetectionScheme detection = DetectionScheme::Direct;
  NoiseSpec noise;
  double electronic_noise = 0.0;
  std::string analysis_frequency;
  std::optional<McConfig> mc;
  OutputSpec output;

  /// Quarter-wave plate at 0 deg, half-wave plate at 22.5 deg, splitter.
  static std::vector<ElementSpec> default_chain();

  /// Throws ConfigError naming the first problem: bad ranges, plates after
  /// the splitter, unresolved targets, missing splitter for the direct scheme.
  void validate() const;
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

PumpPhase parse_mode(const std::string& s);
Format parse_format(const std::string& s);
std::string to_string(PumpPhase p);
std::string to_string(DetectionScheme d);

}  // namespace cvepr::cli

#endif  // CVEPR_CLI_CONFIG_H
