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

#ifndef CVEPR_DETECTION_H
#define CVEPR_DETECTION_H

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cvepr/gaussian.h"

namespace cvepr {

/// Below this mean photon number (|<a>| < 10) the linear expansion of a
/// photocurrent is flagged as unreliable.
inline constexpr double kBrightPhotonThreshold = 100.0;

struct LinearizationWarning {
  std::string label;  // mode or port
  double mean_photons = 0.0;
};

/// Photocurrent expanded to first order in the quadrature fluctuations:
/// i = dc + coeffs . (delta X1, delta Y1, ...).
struct LinearObservable {
  ModeRegistry registry;
  double dc = 0.0;
  Vector coeffs;
  std::vector<LinearizationWarning> warnings;

  static LinearObservable zero(const ModeRegistry& registry);
};

/// Linearized photon number of one mode. With mean quadratures (x, y):
/// dc = (x^2 + y^2)/4 - 1/2 + tr(V_mode)/4, coeffs = (x/2, y/2) on that mode.
LinearObservable direct_detect(const GaussianState& state, std::string_view label,
                               double bright_threshold = kBrightPhotonThreshold);

/// Sum of direct_detect over the polarization modes reaching one detector.
/// The brightness warning is judged on the port total and named `port`.
LinearObservable detect_port(const GaussianState& state, std::span<const std::string> labels,
                             std::string_view port,
                             double bright_threshold = kBrightPhotonThreshold);

/// Radio-frequency power splitter: each output carries dc/2 and coeffs/sqrt2.
std::pair<LinearObservable, LinearObservable> rf_split(const LinearObservable& obs);

LinearObservable current_sum(const LinearObservable& a, const LinearObservable& b);
LinearObservable current_diff(const LinearObservable& a, const LinearObservable& b);

/// Detector port membership: each port collects both polarizations leaving
/// one face of the polarizing beam splitter.
struct DetectorPorts {
  std::vector<std::string> c = {"c", "c_leak"};
  std::vector<std::string> d = {"d", "d_leak"};
};

/// The two detectors' photocurrents, each divided by an RF splitter, with one
/// half of each summed and the other half subtracted.
struct SplitCurrents {
  LinearObservable port_c;
  LinearObservable port_d;
  LinearObservable sum;   // i+ = c1 + d1
  LinearObservable diff;  // i- = c2 - d2
};

SplitCurrents split_currents(const GaussianState& state, const DetectorPorts& ports = {},
                             double bright_threshold = kBrightPhotonThreshold);

/// Shot-noise calibration: alpha^2 recovered as the mean-field photon number
/// per port, (|<c>|^2 + |<d>|^2) / 2 summed over each port's modes.
double calibrated_alpha_squared(const GaussianState& state, const DetectorPorts& ports = {});

/// coeffs^T V coeffs, plus an additive electronic noise floor.
double current_variance(const GaussianState& state, const LinearObservable& obs,
                        double electronic_noise = 0.0);

/// Re-expresses an observable defined after `op` in the quadratures before
/// it: coeffs_in = S^T coeffs_out.
LinearObservable pull_back(const LinearObservable& obs, const SymplecticOp& op);

/// Variance of X cos(theta) + Y sin(theta) on one mode, as a balanced
/// homodyne detector with local-oscillator phase theta would see it.
double homodyne_variance(const GaussianState& state, std::string_view label, double lo_phase);

/// Mean-field part of a mode's photon number, |<a>|^2.
double mean_field_photons(const GaussianState& state, std::string_view label);

}  // namespace cvepr

#endif  // CVEPR_DETECTION_H
