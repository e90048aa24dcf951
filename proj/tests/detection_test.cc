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

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

#include "cvepr/optics.h"
#include "test_util.h"

using namespace cvepr;
using cvepr::testing::detector_state;
using cvepr::testing::max_abs_diff;

namespace {

constexpr double kE2 = 0.1353352832366127;  // e^-2

// Full optical path of the scheme, so observables can be pulled back onto
// the source quadratures (signal, idler, vac_h, vac_v).
LinearObservable to_source(const LinearObservable& obs) {
  return pull_back(pull_back(obs, pbs({.horizontal = "p", .vertical = "s"})), measurement_chain());
}

Vector source_pattern(double xa, double ya, double xb, double yb) {
  Vector v = Vector::Zero(8);
  v.head<4>() << xa, ya, xb, yb;
  return v;
}

// Var of an unnormalized two-mode combination on the source.
double combo(const GaussianState& s, Quadrature q, double sign) {
  return quadrature_variance(
      s, quadrature_coeffs(s.registry(), {{"signal", q, 1.0}, {"idler", q, sign}}));
}

}  // namespace

TEST(DirectDetect, coherent_mode) {
  auto s = displace(new_vacuum({"a"}), "a", 7.0);
  auto obs = direct_detect(s, "a");
  EXPECT_NEAR(obs.dc, 49.0, 1e-12);
  EXPECT_NEAR(obs.coeffs(0), 7.0, 1e-15);
  EXPECT_EQ(obs.coeffs(1), 0.0);
  ASSERT_EQ(obs.warnings.size(), 1u);  // 49 photons is below the bright gate
  EXPECT_EQ(obs.warnings[0].label, "a");

  auto bright = direct_detect(displace(new_vacuum({"a"}), "a", 10.5), "a");
  EXPECT_TRUE(bright.warnings.empty());
}

TEST(DirectDetect, vacuum_is_degenerate_and_flagged) {
  auto obs = direct_detect(new_vacuum({"a", "b"}), "b");
  EXPECT_EQ(obs.dc, 0.0);
  EXPECT_EQ(obs.coeffs.cwiseAbs().maxCoeff(), 0.0);
  ASSERT_EQ(obs.warnings.size(), 1u);
  EXPECT_EQ(obs.warnings[0].mean_photons, 0.0);
}

TEST(DirectDetect, general_mean_uses_both_quadratures) {
  auto s = displace(new_vacuum({"a", "b"}), "b", {3.0, -4.0});
  auto obs = direct_detect(s, "b");
  EXPECT_NEAR(obs.dc, 25.0, 1e-12);
  EXPECT_NEAR(obs.coeffs(2), 3.0, 1e-15);
  EXPECT_NEAR(obs.coeffs(3), -4.0, 1e-15);
  EXPECT_THROW(direct_detect(s, "z"), ModelError);
}

TEST(DirectDetect, thermal_noise_enters_mean) {
  // Reduced EPR mode is thermal with variance cosh 2r: mean photons sinh^2 r.
  auto obs = direct_detect(cvepr::testing::tmsv(1.0), "a");
  EXPECT_NEAR(obs.dc, std::pow(std::sinh(1.0), 2), 1e-12);
}

// Photon-number coefficients of both ports after the full chain, expressed on
// the source fluctuations (dXa, dYa, dXb, dYb): n_c = a/2 (1, -1, 1, 1),
// n_d = a/2 (1, 1, 1, -1).
TEST(PortCoefficients, match_linearized_photon_numbers) {
  for (double alpha : {1.0, 10.0, 100.0}) {
    const auto out = detector_state(nopa_source({.alpha = alpha, .r = 0.8}));
    const DetectorPorts ports;
    const auto nc = to_source(detect_port(out, ports.c, "c"));
    const auto nd = to_source(detect_port(out, ports.d, "d"));
    ASSERT_EQ(nc.registry.labels()[0], "signal");
    ASSERT_EQ(nc.registry.labels()[1], "idler");
    const double h = alpha / 2.0;
    EXPECT_LT(max_abs_diff(nc.coeffs, source_pattern(h, -h, h, h)), 1e-12) << alpha;
    EXPECT_LT(max_abs_diff(nd.coeffs, source_pattern(h, h, h, -h)), 1e-12) << alpha;
    // Each port carries half the total mean field, alpha^2.
    EXPECT_NEAR(mean_field_photons(out, "c"), alpha * alpha, 1e-9 * alpha * alpha);
    EXPECT_NEAR(mean_field_photons(out, "d"), alpha * alpha, 1e-9 * alpha * alpha);
  }
}

TEST(RfSplit, halves_variance_and_conserves_power) {
  auto s = nopa_source({.alpha = 30.0, .r = 0.6});
  auto obs = direct_detect(s, "signal");
  auto [h1, h2] = rf_split(obs);
  EXPECT_DOUBLE_EQ(h1.dc, obs.dc / 2.0);
  const double v = current_variance(s, obs);
  EXPECT_NEAR(current_variance(s, h1), v / 2.0, 1e-12 * v);
  EXPECT_NEAR(current_variance(s, h1) + current_variance(s, h2), v, 1e-12 * v);

  auto [z1, z2] = rf_split(LinearObservable::zero(s.registry()));
  EXPECT_EQ(z1.dc, 0.0);
  EXPECT_EQ(z2.coeffs.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Currents, sum_and_difference_arithmetic) {
  auto s = displace(new_vacuum({"a", "b"}), "a", 12.0);
  auto a = direct_detect(s, "a");
  auto b = direct_detect(s, "b");
  auto sum = current_sum(a, b);
  EXPECT_DOUBLE_EQ(sum.dc, a.dc + b.dc);
  auto self = current_diff(a, a);
  EXPECT_EQ(self.dc, 0.0);
  EXPECT_EQ(self.coeffs.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(current_variance(s, self), 0.0);
  // Warnings are merged without duplicates.
  EXPECT_EQ(current_sum(b, b).warnings.size(), 1u);

  auto other = direct_detect(new_vacuum({"x", "y"}), "x");
  EXPECT_THROW(current_sum(a, other), ModelError);
  EXPECT_THROW(current_variance(new_vacuum({"x", "y"}), a), ModelError);
}

TEST(Currents, prefactor_over_alpha_r_grid) {
  for (double alpha : {5.0, 20.0, 100.0, 400.0, 1000.0}) {
    for (double r : {0.0, 0.3, 0.7, 1.2, 2.0}) {
      const auto src = nopa_source({.alpha = alpha, .r = r});
      const auto out = detector_state(src);
      const auto cur = split_currents(out);
      const double want_sum = alpha * alpha / 2.0 * combo(src, Quadrature::X, +1);
      const double want_diff = alpha * alpha / 2.0 * combo(src, Quadrature::Y, -1);
      EXPECT_NEAR(current_variance(out, cur.sum), want_sum, 1e-12 * want_sum) << alpha << " " << r;
      EXPECT_NEAR(current_variance(out, cur.diff), want_diff, 1e-12 * want_diff)
          << alpha << " " << r;
    }
  }
}

TEST(Currents, squeezed_and_shot_noise_examples) {
  const auto out = detector_state(nopa_source({.alpha = 100.0, .r = 1.0}));
  const auto cur = split_currents(out);
  EXPECT_NEAR(current_variance(out, cur.sum), 1353.3528323661271, 1e-9);
  EXPECT_NEAR(current_variance(out, cur.diff), 1353.3528323661271, 1e-9);
  EXPECT_TRUE(cur.sum.warnings.empty());

  const auto coherent = detector_state(nopa_source({.alpha = 100.0, .r = 0.0}));
  const auto shot = split_currents(coherent);
  EXPECT_NEAR(current_variance(coherent, shot.sum), 1e4, 1e-8);
  EXPECT_NEAR(current_variance(coherent, shot.diff), 1e4, 1e-8);
  EXPECT_NEAR(current_variance(coherent, shot.sum, 2.5), 1e4 + 2.5, 1e-8);
}

TEST(Currents, dim_ports_are_flagged) {
  const auto out = detector_state(nopa_source({.alpha = 3.0, .r = 0.5}));
  const auto cur = split_currents(out);
  ASSERT_EQ(cur.sum.warnings.size(), 2u);
  EXPECT_EQ(cur.sum.warnings[0].label, "c");
  EXPECT_EQ(cur.sum.warnings[1].label, "d");
}

TEST(Currents, common_phase_leaves_currents_invariant) {
  const auto src = nopa_source({.alpha = 100.0, .r = 1.0});
  const auto ref = split_currents(detector_state(src));
  const auto ref_out = detector_state(src);
  const double v_sum = current_variance(ref_out, ref.sum);
  const double v_diff = current_variance(ref_out, ref.diff);
  for (int k = 0; k < 100; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / 99.0;
    const auto out = detector_state(apply(src, phase_shift({"signal", "idler"}, theta)));
    const auto cur = split_currents(out);
    EXPECT_NEAR(current_variance(out, cur.sum), v_sum, 1e-10 * v_sum) << theta;
    EXPECT_NEAR(current_variance(out, cur.diff), v_diff, 1e-10 * v_diff) << theta;
  }
}

// Against a fixed frame (the unrotated source axes), an idler phase phi
// turns the squeezed X-sum into cosh 2r - cos(phi) sinh 2r.
TEST(DifferentialPhase, fixed_frame_sum_variance) {
  const double r = 1.0;
  const double want[] = {kE2, std::cosh(2.0), 7.38905609893065};
  const double phis[] = {0.0, std::numbers::pi / 2, std::numbers::pi};
  for (int k = 0; k < 3; ++k) {
    const auto s = apply(nopa_source({.alpha = 100.0, .r = r}), phase_shift({"idler"}, phis[k]));
    EXPECT_NEAR(combo(s, Quadrature::X, +1) / 2.0, want[k], 1e-9) << phis[k];
    EXPECT_NEAR(std::cosh(2 * r) - std::cos(phis[k]) * std::sinh(2 * r), want[k], 1e-12);
  }
}

TEST(Homodyne, vacuum_and_thermal_reduced_mode) {
  auto vac = new_vacuum({"a"});
  for (double th : {0.0, 0.4, 2.0}) EXPECT_NEAR(homodyne_variance(vac, "a", th), 1.0, 1e-15);
  const auto epr = nopa_source({.alpha = 50.0, .r = 1.0});
  for (double th : {0.0, 0.4, 1.3, 3.0}) {
    EXPECT_NEAR(homodyne_variance(epr, "signal", th), 3.7621956910836314, 1e-12);
  }
  EXPECT_THROW(homodyne_variance(epr, "p", 0.0), ModelError);
}

TEST(Homodyne, lo_phase_sweep_on_squeezed_mode) {
  const double r = 1.0;
  Matrix cov(2, 2);
  cov << std::exp(-2 * r), 0, 0, std::exp(2 * r);
  const GaussianState sq(ModeRegistry({"sq"}), Vector::Zero(2), cov);
  double lo = 1e300;
  double hi = 0.0;
  for (int k = 0; k <= 360; ++k) {
    const double v = homodyne_variance(sq, "sq", std::numbers::pi * k / 360.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_NEAR(lo, kE2, 1e-12);
  EXPECT_NEAR(hi, 7.38905609893065, 1e-12);
}

TEST(PullBack, variance_is_frame_independent) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int k = 0; k < 20; ++k) {
    const auto src = nopa_source({.alpha = 10.0 + 50 * u(rng), .r = u(rng) / 2});
    const auto out = detector_state(src);
    const auto cur = split_currents(out, {}, 0.0);
    const auto back = to_source(cur.diff);
    const auto padded = src.with_vacuum({"vac_h", "vac_v"});
    ASSERT_EQ(back.registry, padded.registry());
    const double v = current_variance(out, cur.diff);
    EXPECT_NEAR(current_variance(padded, back), v, 1e-11 * v);
  }
}
