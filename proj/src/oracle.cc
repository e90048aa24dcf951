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

#include "cvepr/oracle.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <thread>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "cvepr/detection.h"

namespace cvepr {

namespace {

// Power sums of (value - shift); shift near the mean keeps the central
// moments well conditioned.
struct PowerSums {
  double n = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;

  void add(double d) {
    const double d2 = d * d;
    n += 1.0;
    s1 += d;
    s2 += d2;
    s3 += d2 * d;
    s4 += d2 * d2;
  }
  PowerSums& operator+=(const PowerSums& o) {
    n += o.n;
    s1 += o.s1;
    s2 += o.s2;
    s3 += o.s3;
    s4 += o.s4;
    return *this;
  }
  double offset_mean() const { return s1 / n; }
  double central2() const {
    const double m = s1 / n;
    return s2 / n - m * m;
  }
  double central4() const {
    const double m = s1 / n;
    return s4 / n - 4.0 * m * s3 / n + 6.0 * m * m * s2 / n - 3.0 * m * m * m * m;
  }
  double variance() const { return n > 1.0 ? central2() * n / (n - 1.0) : 0.0; }
  double mean_se() const { return n > 1.0 ? std::sqrt(variance() / n) : 0.0; }
  double variance_se() const {
    if (n <= 1.0) return 0.0;
    const double m2 = central2();
    return std::sqrt(std::max(central4() - m2 * m2, 0.0) / n);
  }
};

using Accumulators = std::vector<PowerSums>;

// Pairwise reduction in batch order: deterministic for any thread count.
Accumulators reduce_pairwise(std::span<const Accumulators> parts) {
  if (parts.size() == 1) return parts.front();
  const auto half = parts.size() / 2;
  auto left = reduce_pairwise(parts.first(half));
  const auto right = reduce_pairwise(parts.subspan(half));
  for (std::size_t k = 0; k < left.size(); ++k) left[k] += right[k];
  return left;
}

template <class Fn>
Accumulators accumulate(const WignerSampler& sampler, const McConfig& config, std::size_t count,
                        Fn fn) {
  config.validate();
  const std::size_t batches = (config.samples + config.batch - 1) / config.batch;
  std::vector<Accumulators> parts(batches, Accumulators(count));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t b = next++; b < batches; b = next++) {
      const std::size_t n = std::min(config.batch, config.samples - b * config.batch);
      const Matrix samples = sampler.draw(config.seed, b, n);
      for (Eigen::Index j = 0; j < samples.cols(); ++j) fn(samples.col(j), parts[b]);
    }
  };
  unsigned threads = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(batches));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  return reduce_pairwise(parts);
}

McReport make_report(const PowerSums& exact, const PowerSums& linear, double shift,
                     double linearized_mean, double linearized_variance) {
  McReport r;
  r.samples = static_cast<std::size_t>(exact.n);
  r.mc_mean = shift + exact.offset_mean();
  r.mc_variance = exact.variance();
  r.linearized_mean = linearized_mean;
  r.linearized_variance = linearized_variance;
  const double scale = linearized_variance > 0.0 ? linearized_variance : 1.0;
  r.relative_error = std::abs(r.mc_variance - linearized_variance) / scale;
  r.standard_error = exact.mean_se();
  r.variance_standard_error = exact.variance_se();
  r.linearization_error = std::abs(exact.variance() - linear.variance()) / scale;
  return r;
}

double photons(const Eigen::Ref<const Vector>& x, std::size_t mode) {
  const auto k = static_cast<Eigen::Index>(2 * mode);
  return (x(k) * x(k) + x(k + 1) * x(k + 1)) / 4.0 - 0.5;
}

}  // namespace

void McConfig::validate() const {
  if (samples < 1) throw ModelError("monte carlo: samples must be >= 1");
  if (batch < 1) throw ModelError("monte carlo: batch must be >= 1");
}

WignerSampler::WignerSampler(const GaussianState& state) : state_(state) {
  if (!check_physicality(state).physical) {
    throw ModelError("wigner sampler: state is not physical");
  }
  Eigen::LLT<Matrix> llt(state.cov());
  if (llt.info() == Eigen::Success) {
    factor_ = llt.matrixL();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(state.cov());
    factor_ = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }
}

Matrix WignerSampler::draw(std::uint64_t seed, std::uint64_t stream, std::size_t n) const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  const auto dim = state_.mean().size();
  Matrix z(dim, static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) z(i, j) = normal(rng);
  }
  Matrix x = factor_ * z;
  x.colwise() += state_.mean();
  return x;
}

Matrix sample_wigner(const GaussianState& state, const McConfig& config) {
  config.validate();
  const WignerSampler sampler(state);
  Matrix all(state.mean().size(), static_cast<Eigen::Index>(config.samples));
  for (std::size_t b = 0, done = 0; done < config.samples; ++b) {
    const std::size_t n = std::min(config.batch, config.samples - done);
    all.middleCols(static_cast<Eigen::Index>(done), static_cast<Eigen::Index>(n)) =
        sampler.draw(config.seed, b, n);
    done += n;
  }
  return all;
}

McReport mc_photon_stats(const GaussianState& state, std::string_view label,
                         const McConfig& config) {
  const WignerSampler sampler(state);
  const auto mode = state.registry().index_of(label);
  const auto obs = direct_detect(state, label, 0.0);
  const Vector mean = state.mean();
  const auto acc = accumulate(sampler, config, 2, [&](const auto& x, Accumulators& a) {
    a[0].add(photons(x, mode) - obs.dc);
    a[1].add(obs.coeffs.dot(x - mean));
  });
  return make_report(acc[0], acc[1], obs.dc, obs.dc, quadrature_variance(state, obs.coeffs));
}

CurrentMcReport mc_current_variance(const GaussianState& state_after_chain, const McConfig& config,
                                    const DetectorPorts& ports) {
  const auto& state = state_after_chain;
  const WignerSampler sampler(state);
  const auto currents = split_currents(state, ports, 0.0);
  const auto& obs_c = currents.port_c;
  const auto& obs_d = currents.port_d;
  const auto& i_sum = currents.sum;
  const auto& i_diff = currents.diff;

  std::vector<std::size_t> modes_c;
  std::vector<std::size_t> modes_d;
  for (const auto& l : ports.c) modes_c.push_back(state.registry().index_of(l));
  for (const auto& l : ports.d) modes_d.push_back(state.registry().index_of(l));
  const Vector mean = state.mean();
  const double split = 1.0 / std::numbers::sqrt2;

  const auto acc = accumulate(sampler, config, 4, [&](const auto& x, Accumulators& a) {
    double n_c = 0.0;
    double n_d = 0.0;
    for (auto m : modes_c) n_c += photons(x, m);
    for (auto m : modes_d) n_d += photons(x, m);
    const double fc = (n_c - obs_c.dc) * split;
    const double fd = (n_d - obs_d.dc) * split;
    const Vector dx = x - mean;
    a[0].add(fc + fd);
    a[1].add(i_sum.coeffs.dot(dx));
    a[2].add(fc - fd);
    a[3].add(i_diff.coeffs.dot(dx));
  });
  return {make_report(acc[0], acc[1], i_sum.dc, i_sum.dc, current_variance(state, i_sum)),
          make_report(acc[2], acc[3], i_diff.dc, i_diff.dc, current_variance(state, i_diff))};
}

}  // namespace cvepr
