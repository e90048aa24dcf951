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

#ifndef CVEPR_OPTICS_H
#define CVEPR_OPTICS_H

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cvepr/gaussian.h"

namespace cvepr {

/// Pump-seed relative phase of the NOPA. Deamplification gives
/// anti-correlated amplitude and correlated phase quadratures.
enum class PumpPhase { Deamplification, Amplification };

struct SourceSpec {
  double alpha = 0.0;         // <a> = <b> = alpha at the source output
  double r = 0.0;             // two-mode squeezing parameter
  PumpPhase pump_phase = PumpPhase::Deamplification;
  double excess_noise = 0.0;  // added to every two-mode combination variance
  double efficiency = 1.0;    // escape/propagation efficiency, in (0, 1]

  /// Throws ModelError on out-of-range fields.
  void validate() const;
};

/// The two polarization modes of one copropagating beam. `x` is the axis
/// the signal is emitted on (s-polarized, vertical), `y` the idler axis
/// (p-polarized, horizontal).
struct ModePair {
  std::string x;
  std::string y;
};

inline const ModePair kSourceModes{"signal", "idler"};

enum class PlateKind { Quarter, Half };

struct WavePlateSpec {
  PlateKind kind = PlateKind::Quarter;
  /// Fast-axis angle in degrees, measured from the x (signal) axis toward y.
  double fast_axis_deg = 0.0;

  /// Angle reduced to [0, 180).
  double normalized_angle_deg() const;
};

/// Two-mode source with equal in-phase means (alpha, alpha). In
/// deamplification Var((Xa+Xb)/sqrt2) = Var((Ya-Yb)/sqrt2) = e^{-2r} + excess
/// and the conjugate combinations carry e^{+2r} + excess; amplification
/// swaps which combinations are squeezed. Efficiency acts on the
/// fluctuations as a loss channel.
GaussianState nopa_source(const SourceSpec& spec, const ModePair& labels = kSourceModes);

/// Jones matrix of a linear retarder: the fast axis is retardance-free and
/// the slow axis picks up exp(i * retardance) (convention a -> e^{i theta} a).
Eigen::Matrix2cd retarder_jones(double retardance, double fast_axis_rad);

/// At 0 degrees: signal untouched, idler b -> i b.
SymplecticOp quarter_wave_plate(const WavePlateSpec& spec, const ModePair& in,
                                const ModePair& out);
inline SymplecticOp quarter_wave_plate(const WavePlateSpec& spec,
                                       const ModePair& in = kSourceModes) {
  return quarter_wave_plate(spec, in, in);
}

/// Reflection of the polarization about the fast axis.
SymplecticOp half_wave_plate(const WavePlateSpec& spec, const ModePair& in, const ModePair& out);
inline SymplecticOp half_wave_plate(const WavePlateSpec& spec, const ModePair& in = kSourceModes) {
  return half_wave_plate(spec, in, in);
}

inline constexpr double kChainHalfWaveAngleDeg = 22.5;

/// Output labels of the measurement chain, in slot order: the x output
/// carries s = (a + ib)/sqrt2, the y output p = (a - ib)/sqrt2.
inline const ModePair kChainOutputs{"s", "p"};

/// Half-wave plate at 22.5 degrees after a quarter-wave plate at 0 degrees.
SymplecticOp measurement_chain(const ModePair& in = kSourceModes,
                               const ModePair& out = kChainOutputs);

/// The decomposition p = (a - ib)/sqrt2, s = (a + ib)/sqrt2 written down
/// directly, outputs ordered (p, s).
SymplecticOp mode_decomposition(const ModePair& in = kSourceModes,
                                const std::string& p_label = "p",
                                const std::string& s_label = "s");

/// Output port labels of the polarizing beam splitter. `c` and `d` are the
/// routed polarizations (transmitted horizontal, reflected vertical); the
/// leak modes are the orthogonal polarization in each port.
struct PbsPorts {
  std::string c = "c";
  std::string d = "d";
  std::string c_leak = "c_leak";
  std::string d_leak = "d_leak";
};

struct PbsInputs {
  std::string horizontal;
  std::string vertical;
  std::string vacuum_horizontal = "vac_h";
  std::string vacuum_vertical = "vac_v";
};

/// Polarizing beam splitter with the unused input arm fed by vacuum.
/// Inputs (h, v, vac_h, vac_v) land slot-for-slot on (c, d, d_leak, c_leak),
/// so the ideal splitter is a pure relabeling. `extinction` is a mixing angle
/// in radians that leaks each polarization into the wrong port.
SymplecticOp pbs(const PbsInputs& in, double extinction = 0.0, const PbsPorts& out = {});

/// a -> e^{i theta} a on every listed mode.
SymplecticOp phase_shift(const std::vector<std::string>& labels, double theta);

/// Beam splitter of transmissivity eta against vacuum, traced out.
GaussianState loss_channel(const GaussianState& state, std::string_view label, double eta);

}  // namespace cvepr

#endif  // CVEPR_OPTICS_H
