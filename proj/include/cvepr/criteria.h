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

#ifndef CVEPR_CRITERIA_H
#define CVEPR_CRITERIA_H

#include <string_view>

#include "cvepr/gaussian.h"

namespace cvepr {

/// Separable states satisfy v_plus + v_minus >= 2 in vacuum units.
inline constexpr double kDuanBound = 2.0;

/// Which pair of two-mode combinations the inseparability sum uses.
enum class Orientation {
  XSumYDiff,  // (Xa + Xb)/sqrt2 and (Ya - Yb)/sqrt2: deamplification
  XDiffYSum,  // (Xa - Xb)/sqrt2 and (Ya + Yb)/sqrt2: amplification
};

struct CriterionReport {
  double v_plus = 0.0;
  double v_minus = 0.0;
  double total = 0.0;
  double bound = kDuanBound;
  bool entangled = false;  // strict: total == bound is not entangled
  double margin_db = 0.0;  // 10 log10(total / bound)
};

CriterionReport make_report(double v_plus, double v_minus);

CriterionReport duan_sum(const GaussianState& state, std::string_view a, std::string_view b,
                         Orientation orientation = Orientation::XSumYDiff);

/// From sum/difference photocurrent variances: v_plus = v_sum / alpha^2,
/// v_minus = v_diff / alpha^2.
CriterionReport duan_from_currents(double v_sum_current, double v_diff_current, double alpha);

/// 10 log10(v) relative to the vacuum level.
double variance_db(double v);

}  // namespace cvepr

#endif  // CVEPR_CRITERIA_H
