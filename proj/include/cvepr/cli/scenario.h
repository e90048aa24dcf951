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

#ifndef CVEPR_CLI_SCENARIO_H
#define CVEPR_CLI_SCENARIO_H

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cvepr/cli/config.h"
#include "cvepr/cli/output.h"
#include "cvepr/criteria.h"
#include "cvepr/detection.h"
#include "cvepr/gaussian.h"
#include "cvepr/oracle.h"

namespace cvepr::cli {

/// Everything computed for one scenario at its nominal phase settings, with
/// current variances averaged over any configured phase drift.
struct ScenarioResult {
  /// Source after the static phases and any phase/loss elements that act on
  /// the source modes ahead of the splitter; plates are skipped. This is the
  /// frame a fixed local oscillator would refer to.
  GaussianState fixed_frame;
  /// State on the detectors (direct scheme only).
  std::optional<GaussianState> detected;

  double i_plus_var = 0.0;
  double i_minus_var = 0.0;
  double alpha_sq = 0.0;  // calibration dividing the currents
  CriterionReport measured;
  CriterionReport fixed;     // source-frame witness, deamplification signs
  CriterionReport mirrored;  // source-frame witness, amplification signs
  std::vector<LinearizationWarning> warnings;
  double min_symplectic_eigenvalue = 0.0;
  bool physical = false;
};

/// Gauss-Hermite nodes and weights for a standard normal variable; weights
/// sum to one.
std::pair<Vector, Vector> gauss_hermite(int order);
inline constexpr int kPhaseNoiseOrder = 32;

/// Source state with the static common/differential phase offsets applied.
GaussianState prepared_source(const ScenarioConfig& config, double common_phase,
                              double differential_phase);

/// Runs the chain on a prepared source. With `fixed_frame_only` plates and the
/// splitter are skipped and elements after the splitter are dropped.
GaussianState propagate(const GaussianState& source, const std::vector<ElementSpec>& chain,
                        bool fixed_frame_only = false);

/// Throws ConfigError for invalid configs and ModelError if the physics
/// refuses the inputs.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// Oracle run on the nominal detected state (direct scheme only).
CurrentMcReport run_scenario_mc(const ScenarioResult& result, const McConfig& mc);

/// The result record. `parameter`/`value` name the swept quantity
/// ("none" for single runs).
Row make_record(const ScenarioConfig& config, const ScenarioResult& result,
                const std::string& parameter, double value,
                const std::optional<CurrentMcReport>& mc = std::nullopt);

}  // namespace cvepr::cli

#endif  // CVEPR_CLI_SCENARIO_H
