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

#ifndef CVEPR_ORACLE_H
#define CVEPR_ORACLE_H

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cvepr/detection.h"
#include "cvepr/gaussian.h"

namespace cvepr {

// Monte Carlo cross-check of the linearized detection model. Field samples are
// drawn from the Wigner function (a Gaussian with the state's mean and
// covariance) and photon numbers are evaluated exactly as |a|^2 - 1/2, which
// recovers the normal-ordered mean. Variances carry an O(1) symmetric-ordering
// offset that is negligible against the alpha^2-sized signal.

struct McConfig {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0x5eed'c0de;
  std::size_t batch = 1 << 16;
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const;
};

struct McReport {
  double mc_mean = 0.0;
  double mc_variance = 0.0;
  double linearized_mean = 0.0;
  double linearized_variance = 0.0;
  double relative_error = 0.0;        // |mc_variance - linearized_variance| / linearized_variance
  double standard_error = 0.0;        // of mc_mean
  double variance_standard_error = 0.0;
  /// Same-sample comparison of exact and linearized currents; sampling noise
  /// of the shared linear part cancels, leaving the truncation error.
  double linearization_error = 0.0;
  std::size_t samples = 0;
};

struct CurrentMcReport {
  McReport sum;
  McReport diff;
};

class WignerSampler {
 public:
  /// Throws ModelError for unphysical states. Factorizes the covariance by
  /// Cholesky, falling back to an eigendecomposition when it is only
  /// semidefinite.
  explicit WignerSampler(const GaussianState& state);

  /// n samples as columns; stream selects an independent substream of seed.
  Matrix draw(std::uint64_t seed, std::uint64_t stream, std::size_t n) const;

  const GaussianState& state() const { return state_; }

 private:
  GaussianState state_;
  Matrix factor_;
};

/// All samples for config, batch after batch (batch b uses stream b), so the
/// result does not depend on the thread count.
Matrix sample_wigner(const GaussianState& state, const McConfig& config);

McReport mc_photon_stats(const GaussianState& state, std::string_view label,
                         const McConfig& config);

/// Exact sum and difference currents of the two detector ports after the RF
/// split, against the linearized prediction.
CurrentMcReport mc_current_variance(const GaussianState& state_after_chain, const McConfig& config,
                                    const DetectorPorts& ports = {});

}  // namespace cvepr

#endif  // CVEPR_ORACLE_H
