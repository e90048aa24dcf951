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

#include "cvepr/criteria.h"

#include <cmath>
#include <limits>
#include <string>

namespace cvepr {

CriterionReport make_report(double v_plus, double v_minus) {
  CriterionReport report;
  report.v_plus = v_plus;
  report.v_minus = v_minus;
  report.total = v_plus + v_minus;
  report.entangled = report.total < report.bound;
  report.margin_db = report.total > 0.0 ? 10.0 * std::log10(report.total / report.bound)
                                        : -std::numeric_limits<double>::infinity();
  return report;
}

CriterionReport duan_sum(const GaussianState& state, std::string_view a, std::string_view b,
                         Orientation orientation) {
  // Unit weights, halved afterwards: (1/sqrt2)^2 rounds below 1/2 and would
  // push coherent beams just under the bound.
  const double h = 1.0;
  const double x_sign = orientation == Orientation::XSumYDiff ? 1.0 : -1.0;
  const std::string la(a);
  const std::string lb(b);
  const auto& reg = state.registry();
  const double v_plus = quadrature_variance(
      state, quadrature_coeffs(reg, {{la, Quadrature::X, h}, {lb, Quadrature::X, x_sign * h}}));
  const double v_minus = quadrature_variance(
      state, quadrature_coeffs(reg, {{la, Quadrature::Y, h}, {lb, Quadrature::Y, -x_sign * h}}));
  return make_report(v_plus / 2.0, v_minus / 2.0);
}

CriterionReport duan_from_currents(double v_sum_current, double v_diff_current, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ModelError("duan_from_currents: alpha must be positive");
  }
  const double a2 = alpha * alpha;
  return make_report(v_sum_current / a2, v_diff_current / a2);
}

double variance_db(double v) {
  if (!(v > 0.0)) throw ModelError("variance_db: variance must be positive");
  return 10.0 * std::log10(v);
}

}  // namespace cvepr
