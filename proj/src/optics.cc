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

#include "cvepr/optics.h"

#include <cmath>
#include <numbers>

namespace cvepr {

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

std::vector<std::string> labels_of(const ModePair& pair) { return {pair.x, pair.y}; }

}  // namespace

void SourceSpec::validate() const {
  if (!std::isfinite(alpha) || alpha < 0.0) throw ModelError("source: alpha must be >= 0");
  if (!std::isfinite(r) || r < 0.0) throw ModelError("source: r must be >= 0");
  if (!std::isfinite(excess_noise) || excess_noise < 0.0) {
    throw ModelError("source: excess_noise must be >= 0");
  }
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw ModelError("source: efficiency must lie in (0, 1]");
  }
}

double WavePlateSpec::normalized_angle_deg() const {
  double a = std::fmod(fast_axis_deg, 180.0);
  if (a < 0.0) a += 180.0;
  return a;
}

GaussianState nopa_source(const SourceSpec& spec, const ModePair& labels) {
  spec.validate();
  const double ch = std::cosh(2.0 * spec.r);
  const double sh = std::sinh(2.0 * spec.r);
  const double sign = spec.pump_phase == PumpPhase::Deamplification ? 1.0 : -1.0;

  Matrix cov = Matrix::Identity(4, 4) * (ch + spec.excess_noise);
  cov(0, 2) = cov(2, 0) = -sign * sh;  // X_a, X_b
  cov(1, 3) = cov(3, 1) = sign * sh;   // Y_a, Y_b

  const double pre_loss = 2.0 * spec.alpha / std::sqrt(spec.efficiency);
  Vector mean(4);
  mean << pre_loss, 0.0, pre_loss, 0.0;

  GaussianState state(ModeRegistry(labels_of(labels)), std::move(mean), std::move(cov));
  state = loss_channel(state, labels.x, spec.efficiency);
  state = loss_channel(state, labels.y, spec.efficiency);
  if (!check_physicality(state).physical) throw ModelError("source: resulting state is unphysical");
  return state;
}

Eigen::Matrix2cd retarder_jones(double retardance, double fast_axis_rad) {
  const double c = std::cos(fast_axis_rad);
  const double s = std::sin(fast_axis_rad);
  Eigen::Matrix2cd rot;
  rot << c, -s, s, c;
  Eigen::Matrix2cd diag = Eigen::Matrix2cd::Zero();
  diag(0, 0) = 1.0;
  diag(1, 1) = std::polar(1.0, retardance);
  return rot * diag * rot.transpose();
}

SymplecticOp quarter_wave_plate(const WavePlateSpec& spec, const ModePair& in,
                                const ModePair& out) {
  if (spec.kind != PlateKind::Quarter) throw ModelError("quarter_wave_plate: spec is not Quarter");
  const auto j = retarder_jones(std::numbers::pi / 2.0, spec.normalized_angle_deg() * kDegree);
  return SymplecticOp::from_mode_map(labels_of(in), labels_of(out), j);
}

SymplecticOp half_wave_plate(const WavePlateSpec& spec, const ModePair& in, const ModePair& out) {
  if (spec.kind != PlateKind::Half) throw ModelError("half_wave_plate: spec is not Half");
  const auto j = retarder_jones(std::numbers::pi, spec.normalized_angle_deg() * kDegree);
  return SymplecticOp::from_mode_map(labels_of(in), labels_of(out), j);
}

SymplecticOp measurement_chain(const ModePair& in, const ModePair& out) {
  const auto qwp = quarter_wave_plate({PlateKind::Quarter, 0.0}, in);
  const auto hwp = half_wave_plate({PlateKind::Half, kChainHalfWaveAngleDeg}, in, out);
  return compose(hwp, qwp);
}

SymplecticOp mode_decomposition(const ModePair& in, const std::string& p_label,
                                const std::string& s_label) {
  using namespace std::complex_literals;
  const double h = 1.0 / std::numbers::sqrt2;
  Eigen::Matrix2cd u;
  u << h, -1i * h,  // p = (a - ib)/sqrt2
      h, 1i * h;    // s = (a + ib)/sqrt2
  return SymplecticOp::from_mode_map(labels_of(in), {p_label, s_label}, u);
}

SymplecticOp pbs(const PbsInputs& in, double extinction, const PbsPorts& out) {
  if (!std::isfinite(extinction)) throw ModelError("pbs: extinction must be finite");
  const double c = std::cos(extinction);
  const double s = std::sin(extinction);
  // Slots: 0 h_in -> c, 1 v_in -> d, 2 vac_h -> d_leak, 3 vac_v -> c_leak.
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  u(0, 0) = c;
  u(0, 2) = -s;
  u(2, 0) = s;
  u(2, 2) = c;
  u(1, 1) = c;
  u(1, 3) = -s;
  u(3, 1) = s;
  u(3, 3) = c;
  return SymplecticOp::from_mode_map(
      {in.horizontal, in.vertical, in.vacuum_horizontal, in.vacuum_vertical},
      {out.c, out.d, out.d_leak, out.c_leak}, u);
}

SymplecticOp phase_shift(const std::vector<std::string>& labels, double theta) {
  if (!std::isfinite(theta)) throw ModelError("phase_shift: theta must be finite");
  const auto m = static_cast<Eigen::Index>(labels.size());
  const Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(m, m) * std::polar(1.0, theta);
  return SymplecticOp::from_mode_map(labels, labels, u);
}

GaussianState loss_channel(const GaussianState& state, std::string_view label, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ModelError("loss_channel: eta must lie in [0, 1]");
  const auto k = static_cast<Eigen::Index>(2 * state.registry().index_of(label));
  const auto n = state.cov().rows();
  Matrix t = Matrix::Identity(n, n);
  t(k, k) = t(k + 1, k + 1) = std::sqrt(eta);
  Matrix cov = t * state.cov() * t;
  cov(k, k) += 1.0 - eta;
  cov(k + 1, k + 1) += 1.0 - eta;
  return GaussianState(state.registry(), t * state.mean(), std::move(cov));
}

}  // namespace cvepr
