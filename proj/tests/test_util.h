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

#ifndef CVEPR_TESTS_TEST_UTIL_H
#define CVEPR_TESTS_TEST_UTIL_H

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cvepr/gaussian.h"
#include "cvepr/optics.h"

namespace cvepr::testing {

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Two-mode squeezed vacuum written out from its closed form; independent of
/// the optics module.
inline GaussianState tmsv(double r, const std::string& a = "a", const std::string& b = "b") {
  const double ch = std::cosh(2 * r);
  const double sh = std::sinh(2 * r);
  Matrix cov(4, 4);
  cov << ch, 0, -sh, 0,  //
      0, ch, 0, sh,      //
      -sh, 0, ch, 0,     //
      0, sh, 0, ch;
  return GaussianState(ModeRegistry({a, b}), Vector::Zero(4), cov);
}

/// Source modes (signal, idler) sent through the plates and the polarizing
/// beam splitter; the p output is routed to port c and s to port d.
inline GaussianState detector_state(const GaussianState& source) {
  auto after = apply(source, measurement_chain()).with_vacuum({"vac_h", "vac_v"});
  return apply(after, pbs({.horizontal = "p", .vertical = "s"}));
}

/// Haar-ish random unitary from the QR decomposition of a complex Ginibre
/// matrix.
inline Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd z(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) z(i, j) = {g(rng), g(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

}  // namespace cvepr::testing

#endif  // CVEPR_TESTS_TEST_UTIL_H
