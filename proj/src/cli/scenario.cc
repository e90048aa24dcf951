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

#include "cvepr/cli/scenario.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "cvepr/optics.h"

namespace cvepr::cli {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::vector<double> nodes_for(double rms, const Vector& z) {
  if (rms == 0.0) return {0.0};
  std::vector<double> out(static_cast<std::size_t>(z.size()));
  for (Eigen::Index k = 0; k < z.size(); ++k) out[static_cast<std::size_t>(k)] = rms * z(k);
  return out;
}

std::vector<double> weights_for(double rms, const Vector& w) {
  if (rms == 0.0) return {1.0};
  return {w.data(), w.data() + w.size()};
}

struct Point {
  double i_plus = 0.0;
  double i_minus = 0.0;
  double fixed_plus = 0.0;
  double fixed_minus = 0.0;
  double mirrored_plus = 0.0;
  double mirrored_minus = 0.0;
  double alpha_sq = 0.0;
  double nu_min = 0.0;
  bool physical = false;
};

Point evaluate(const ScenarioConfig& config, const GaussianState& source,
               std::vector<LinearizationWarning>* warnings) {
  Point p;
  const auto frame = propagate(source, config.chain, true);
  const auto fixed = duan_sum(frame, kSourceModes.x, kSourceModes.y);
  const auto mirrored =
      duan_sum(frame, kSourceModes.x, kSourceModes.y, Orientation::XDiffYSum);
  p.fixed_plus = fixed.v_plus;
  p.fixed_minus = fixed.v_minus;
  p.mirrored_plus = mirrored.v_plus;
  p.mirrored_minus = mirrored.v_minus;
  if (config.detection == DetectionScheme::Direct) {
    const auto out = propagate(source, config.chain);
    const auto cur = split_currents(out);
    p.i_plus = current_variance(out, cur.sum, config.electronic_noise);
    p.i_minus = current_variance(out, cur.diff, config.electronic_noise);
    p.alpha_sq = calibrated_alpha_squared(out);
    const auto phys = check_physicality(out);
    p.nu_min = phys.min_eigenvalue;
    p.physical = phys.physical;
    if (warnings) *warnings = cur.sum.warnings;
  } else {
    // Local oscillator of amplitude alpha, phase-locked to the source frame.
    const double a2 = config.source.alpha * config.source.alpha;
    p.i_plus = a2 * fixed.v_plus + config.electronic_noise;
    p.i_minus = a2 * fixed.v_minus + config.electronic_noise;
    p.alpha_sq = a2;
    const auto phys = check_physicality(frame);
    p.nu_min = phys.min_eigenvalue;
    p.physical = phys.physical;
  }
  return p;
}

}  // namespace

std::pair<Vector, Vector> gauss_hermite(int order) {
  // Golub-Welsch on the Jacobi matrix of the probabilists' Hermite
  // polynomials.
  Matrix jacobi = Matrix::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(jacobi);
  const Vector weights = eig.eigenvectors().row(0).transpose().array().square();
  return {eig.eigenvalues(), weights};
}

GaussianState prepared_source(const ScenarioConfig& config, double common_phase,
                              double differential_phase) {
  auto s = nopa_source(config.source);
  if (common_phase != 0.0) s = apply(s, phase_shift({kSourceModes.x, kSourceModes.y}, common_phase));
  if (differential_phase != 0.0) s = apply(s, phase_shift({kSourceModes.y}, differential_phase));
  return s;
}

GaussianState propagate(const GaussianState& source, const std::vector<ElementSpec>& chain,
                        bool fixed_frame_only) {
  auto state = source;
  const ModePair pair = kSourceModes;
  for (const auto& e : chain) {
    switch (e.kind) {
      case ElementKind::QuarterWave:
        if (!fixed_frame_only) {
          state = apply(state, quarter_wave_plate({PlateKind::Quarter, e.angle_deg}, pair, pair));
        }
        break;
      case ElementKind::HalfWave:
        if (!fixed_frame_only) {
          state = apply(state, half_wave_plate({PlateKind::Half, e.angle_deg}, pair, pair));
        }
        break;
      case ElementKind::Phase:
        state = apply(state, phase_shift(e.targets, e.theta));
        break;
      case ElementKind::Loss:
        for (const auto& t : e.targets) state = loss_channel(state, t, e.eta);
        break;
      case ElementKind::Pbs: {
        if (fixed_frame_only) return state;
        // The y axis carries the horizontal output of the plates.
        const PbsInputs in{.horizontal = pair.y, .vertical = pair.x};
        state = apply(state.with_vacuum({in.vacuum_horizontal, in.vacuum_vertical}),
                      pbs(in, e.extinction));
        break;
      }
    }
  }
  return state;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  config.validate();
  const auto nominal = prepared_source(config, config.noise.common_phase,
                                       config.noise.differential_phase);
  std::vector<LinearizationWarning> warnings;
  const Point centre = evaluate(config, nominal, &warnings);

  const auto [z, w] = gauss_hermite(kPhaseNoiseOrder);
  const auto dc = nodes_for(config.noise.common_phase_rms, z);
  const auto wc = weights_for(config.noise.common_phase_rms, w);
  const auto dd = nodes_for(config.noise.differential_phase_rms, z);
  const auto wd = weights_for(config.noise.differential_phase_rms, w);

  Point avg = centre;
  if (dc.size() > 1 || dd.size() > 1) {
    avg = Point{};
    avg.nu_min = centre.nu_min;
    avg.physical = centre.physical;
    for (std::size_t i = 0; i < dc.size(); ++i) {
      for (std::size_t j = 0; j < dd.size(); ++j) {
        const double weight = wc[i] * wd[j];
        const auto s = prepared_source(config, config.noise.common_phase + dc[i],
                                       config.noise.differential_phase + dd[j]);
        const Point p = evaluate(config, s, nullptr);
        avg.i_plus += weight * p.i_plus;
        avg.i_minus += weight * p.i_minus;
        avg.fixed_plus += weight * p.fixed_plus;
        avg.fixed_minus += weight * p.fixed_minus;
        avg.mirrored_plus += weight * p.mirrored_plus;
        avg.mirrored_minus += weight * p.mirrored_minus;
        avg.alpha_sq += weight * p.alpha_sq;
        avg.nu_min = std::min(avg.nu_min, p.nu_min);
        avg.physical = avg.physical && p.physical;
      }
    }
  }

  ScenarioResult r{.fixed_frame = propagate(nominal, config.chain, true)};
  if (config.detection == DetectionScheme::Direct) r.detected = propagate(nominal, config.chain);
  r.i_plus_var = avg.i_plus;
  r.i_minus_var = avg.i_minus;
  r.alpha_sq = avg.alpha_sq;
  r.measured = duan_from_currents(avg.i_plus, avg.i_minus, std::sqrt(avg.alpha_sq));
  r.fixed = make_report(avg.fixed_plus, avg.fixed_minus);
  r.mirrored = make_report(avg.mirrored_plus, avg.mirrored_minus);
  r.warnings = std::move(warnings);
  r.min_symplectic_eigenvalue = avg.nu_min;
  r.physical = avg.physical;
  return r;
}

CurrentMcReport run_scenario_mc(const ScenarioResult& result, const McConfig& mc) {
  if (!result.detected) throw ConfigError("monte carlo needs the direct detection scheme");
  return mc_current_variance(*result.detected, mc);
}

Row make_record(const ScenarioConfig& config, const ScenarioResult& result,
                const std::string& parameter, double value,
                const std::optional<CurrentMcReport>& mc) {
  Row row("result");
  row.set("scenario", config.id)
      .set("parameter", parameter)
      .set("value", value)
      .set("detection", to_string(config.detection))
      .set("mode", to_string(config.source.pump_phase))
      .set("alpha", config.source.alpha)
      .set("r", config.source.r)
      .set("eta", config.source.efficiency)
      .set("analysis_frequency", config.analysis_frequency)
      .set("i_plus_var", result.i_plus_var)
      .set("i_minus_var", result.i_minus_var)
      .set("alpha_sq", result.alpha_sq)
      .set("norm_plus", result.measured.v_plus)
      .set("norm_minus", result.measured.v_minus)
      .set("duan_total", result.measured.total)
      .set("entangled", result.measured.entangled)
      .set("margin_db", result.measured.margin_db)
      .set("fixed_v_plus", result.fixed.v_plus)
      .set("fixed_v_minus", result.fixed.v_minus)
      .set("fixed_total", result.fixed.total)
      .set("mirrored_total", result.mirrored.total)
      .set("mirrored_entangled", result.mirrored.entangled)
      .set("linearization_ok", result.warnings.empty())
      .set("min_symplectic_eigenvalue", result.min_symplectic_eigenvalue)
      .set("physical", result.physical);
  if (mc) {
    row.set("mc_samples", static_cast<std::int64_t>(mc->sum.samples))
        .set("mc_seed", std::to_string(config.mc ? config.mc->seed : McConfig{}.seed))
        .set("mc_plus_var", mc->sum.mc_variance)
        .set("mc_minus_var", mc->diff.mc_variance)
        .set("mc_plus_se", mc->sum.variance_standard_error)
        .set("mc_minus_se", mc->diff.variance_standard_error)
        .set("mc_plus_rel_err", mc->sum.relative_error)
        .set("mc_minus_rel_err", mc->diff.relative_error)
        .set("mc_plus_lin_err", mc->sum.linearization_error)
        .set("mc_minus_lin_err", mc->diff.linearization_error);
  }
  return row;
}

}  // namespace cvepr::cli
