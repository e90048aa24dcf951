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

#include "cvepr/detection.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cvepr {

namespace {

void require_same_registry(const LinearObservable& a, const LinearObservable& b) {
  if (!(a.registry == b.registry) || a.coeffs.size() != b.coeffs.size()) {
    throw ModelError("photocurrents are defined over different mode registries");
  }
}

LinearObservable combine(const LinearObservable& a, const LinearObservable& b, double sign) {
  require_same_registry(a, b);
  LinearObservable out{a.registry, a.dc + sign * b.dc, a.coeffs + sign * b.coeffs, a.warnings};
  for (const auto& w : b.warnings) {
    const bool seen = std::any_of(out.warnings.begin(), out.warnings.end(),
                                  [&](const auto& x) { return x.label == w.label; });
    if (!seen) out.warnings.push_back(w);
  }
  return out;
}

}  // namespace

LinearObservable LinearObservable::zero(const ModeRegistry& registry) {
  return {registry, 0.0, Vector::Zero(static_cast<Eigen::Index>(registry.dimension())), {}};
}

double mean_field_photons(const GaussianState& state, std::string_view label) {
  return std::norm(state.amplitude(label));
}

LinearObservable direct_detect(const GaussianState& state, std::string_view label,
                               double bright_threshold) {
  const auto m = state.mode_mean(label);
  const auto v = state.mode_cov(label);
  auto obs = LinearObservable::zero(state.registry());
  obs.dc = (m.squaredNorm() + v.trace()) / 4.0 - 0.5;
  const auto k = static_cast<Eigen::Index>(2 * state.registry().index_of(label));
  obs.coeffs(k) = m(0) / 2.0;
  obs.coeffs(k + 1) = m(1) / 2.0;
  const double photons = m.squaredNorm() / 4.0;
  if (photons < bright_threshold) obs.warnings.push_back({std::string(label), photons});
  return obs;
}

LinearObservable detect_port(const GaussianState& state, std::span<const std::string> labels,
                             std::string_view port, double bright_threshold) {
  auto obs = LinearObservable::zero(state.registry());
  double photons = 0.0;
  for (const auto& l : labels) {
    // Per-mode warnings are replaced by one judgement on the port total.
    auto mode = direct_detect(state, l, 0.0);
    obs.dc += mode.dc;
    obs.coeffs += mode.coeffs;
    photons += mean_field_photons(state, l);
  }
  if (photons < bright_threshold) obs.warnings.push_back({std::string(port), photons});
  return obs;
}

std::pair<LinearObservable, LinearObservable> rf_split(const LinearObservable& obs) {
  LinearObservable half{obs.registry, obs.dc / 2.0, obs.coeffs / std::numbers::sqrt2,
                        obs.warnings};
  return {half, half};
}

LinearObservable current_sum(const LinearObservable& a, const LinearObservable& b) {
  return combine(a, b, 1.0);
}

LinearObservable current_diff(const LinearObservable& a, const LinearObservable& b) {
  return combine(a, b, -1.0);
}

SplitCurrents split_currents(const GaussianState& state, const DetectorPorts& ports,
                             double bright_threshold) {
  auto c = detect_port(state, ports.c, "c", bright_threshold);
  auto d = detect_port(state, ports.d, "d", bright_threshold);
  const auto [c1, c2] = rf_split(c);
  const auto [d1, d2] = rf_split(d);
  auto sum = current_sum(c1, d1);
  auto diff = current_diff(c2, d2);
  return {std::move(c), std::move(d), std::move(sum), std::move(diff)};
}

double calibrated_alpha_squared(const GaussianState& state, const DetectorPorts& ports) {
  double photons = 0.0;
  for (const auto& l : ports.c) photons += mean_field_photons(state, l);
  for (const auto& l : ports.d) photons += mean_field_photons(state, l);
  return photons / 2.0;
}

double current_variance(const GaussianState& state, const LinearObservable& obs,
                        double electronic_noise) {
  if (!(obs.registry == state.registry())) {
    throw ModelError("current_variance: observable and state registries differ");
  }
  return quadrature_variance(state, obs.coeffs) + electronic_noise;
}

LinearObservable pull_back(const LinearObservable& obs, const SymplecticOp& op) {
  auto labels = obs.registry.labels();
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < op.num_modes(); ++k) {
    const auto j = obs.registry.index_of(op.outputs()[k]);
    labels[j] = op.inputs()[k];
    idx.push_back(j);
  }
  const auto n = static_cast<Eigen::Index>(obs.registry.dimension());
  Matrix t = Matrix::Identity(n, n);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      t.block<2, 2>(static_cast<Eigen::Index>(2 * idx[j]), static_cast<Eigen::Index>(2 * idx[k])) =
          op.matrix().block<2, 2>(static_cast<Eigen::Index>(2 * j),
                                  static_cast<Eigen::Index>(2 * k));
    }
  }
  return {ModeRegistry(std::move(labels)), obs.dc, t.transpose() * obs.coeffs, obs.warnings};
}

double homodyne_variance(const GaussianState& state, std::string_view label, double lo_phase) {
  return quadrature_variance(
      state, quadrature_coeffs(state.registry(), {{std::string(label), Quadrature::X,
                                                   std::cos(lo_phase)},
                                                  {std::string(label), Quadrature::Y,
                                                   std::sin(lo_phase)}}));
}

}  // namespace cvepr
