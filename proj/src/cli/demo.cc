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

#include "cvepr/cli/commands.h"
#include "cvepr/cli/scenario.h"
#include "cvepr/optics.h"

namespace cvepr::cli {

namespace {

constexpr double kMatrixTolerance = 1e-12;
constexpr double kIdentityTolerance = 1e-10;
constexpr double kMcTolerance = 0.02;

// Port observable re-expressed on (signal, idler, vac_h, vac_v).
LinearObservable on_source(const LinearObservable& obs) {
  return pull_back(pull_back(obs, pbs({.horizontal = kChainOutputs.y, .vertical = kChainOutputs.x})),
                   measurement_chain());
}

GaussianState canonical_detection(const GaussianState& source) {
  const auto after = apply(source, measurement_chain()).with_vacuum({"vac_h", "vac_v"});
  return apply(after, pbs({.horizontal = kChainOutputs.y, .vertical = kChainOutputs.x}));
}

double combo_variance(const GaussianState& s, Quadrature q, double sign) {
  return quadrature_variance(s, quadrature_coeffs(s.registry(), {{kSourceModes.x, q, 1.0},
                                                                 {kSourceModes.y, q, sign}}));
}

}  // namespace

Row check_row(const std::string& kind, const std::string& name, double value, double tolerance,
              bool pass) {
  Row row(kind);
  row.set("name", name).set("value", value).set("tolerance", tolerance).set("pass", pass);
  return row;
}

CommandResult run_demo(const ScenarioConfig& config) {
  config.validate();
  CommandResult res;
  auto check = [&](const std::string& name, double value, double tol) {
    const bool pass = std::isfinite(value) && value <= tol;
    res.ok = res.ok && pass;
    res.rows.push_back(check_row("check", name, value, tol, pass));
  };

  // Plates against the written-out decomposition, rows matched by label.
  const auto chain = measurement_chain().with_output_order({kChainOutputs.y, kChainOutputs.x});
  const auto literal = mode_decomposition();
  check("mode_decomposition", (chain.matrix() - literal.matrix()).cwiseAbs().maxCoeff(),
        kMatrixTolerance);
  check("chain_symplectic", symplectic_error(measurement_chain().matrix()), kMatrixTolerance);

  const auto source = nopa_source(config.source);
  const auto phys = check_physicality(source);
  check("source_physical", std::max(0.0, 1.0 - phys.min_eigenvalue), phys.tolerance);

  // Linearized photon numbers of both ports on the source fluctuations.
  const double a = config.source.alpha;
  const auto out = canonical_detection(source);
  const auto cur = split_currents(out, {}, 0.0);
  const auto nc = on_source(cur.port_c);
  const auto nd = on_source(cur.port_d);
  Vector want_c(4), want_d(4);
  want_c << 1, -1, 1, 1;
  want_d << 1, 1, 1, -1;
  want_c *= a / 2.0;
  want_d *= a / 2.0;
  const double coeff_err = std::max((nc.coeffs.head<4>() - want_c).cwiseAbs().maxCoeff(),
                                    (nd.coeffs.head<4>() - want_d).cwiseAbs().maxCoeff());
  check("port_coefficients", coeff_err, kMatrixTolerance * std::max(1.0, a));
  std::vector<Row> table;
  for (const auto* obs : {&nc, &nd}) {
    Row row("coefficients");
    row.set("port", std::string(obs == &nc ? "c" : "d"))
        .set("dc", obs->dc)
        .set("d_xa", obs->coeffs(0))
        .set("d_ya", obs->coeffs(1))
        .set("d_xb", obs->coeffs(2))
        .set("d_yb", obs->coeffs(3));
    table.push_back(row);
  }

  // Current variances against alpha^2/2 times the unnormalized combinations.
  const double v_sum = current_variance(out, cur.sum);
  const double v_diff = current_variance(out, cur.diff);
  const double want_sum = a * a / 2.0 * combo_variance(source, Quadrature::X, 1.0);
  const double want_diff = a * a / 2.0 * combo_variance(source, Quadrature::Y, -1.0);
  check("current_prefactor",
        std::max(std::abs(v_sum - want_sum) / want_sum, std::abs(v_diff - want_diff) / want_diff),
        kMatrixTolerance);

  const auto measured = duan_from_currents(v_sum, v_diff, std::sqrt(calibrated_alpha_squared(out)));
  const auto witness = duan_sum(source, kSourceModes.x, kSourceModes.y);
  check("end_to_end_witness", std::abs(measured.total - witness.total), kIdentityTolerance);

  res.rows.insert(res.rows.end(), table.begin(), table.end());
  const auto result = run_scenario(config);
  auto record = make_record(config, result, "none", 0.0);
  res.ok = res.ok && result.physical;
  res.rows.push_back(std::move(record));
  return res;
}

CommandResult run_mc(const ScenarioConfig& input) {
  auto config = input;
  if (!config.mc) config.mc = McConfig{};
  config.validate();
  CommandResult res;
  const auto result = run_scenario(config);
  const auto mc = run_scenario_mc(result, *config.mc);
  const double err = std::max(mc.sum.relative_error, mc.diff.relative_error);
  const bool bright = result.warnings.empty();
  const bool pass = err < kMcTolerance || !bright;
  res.ok = pass && result.physical;
  res.rows.push_back(make_record(config, result, "none", 0.0, mc));
  res.rows.push_back(check_row("check", bright ? "mc_agreement" : "mc_agreement_dim_ports", err,
                               kMcTolerance, pass));
  return res;
}

}  // namespace cvepr::cli
