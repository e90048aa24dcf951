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

#ifndef CVEPR_GAUSSIAN_H
#define CVEPR_GAUSSIAN_H

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace cvepr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Quadratures are X = a + a^dag and Y = i(a^dag - a), so [X, Y] = 2i and the
// vacuum has unit variance on both. Slot layout is (X1, Y1, X2, Y2, ...).
inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr double kPhysicalityTolerance = 1e-9;
inline constexpr double kSymplecticTolerance = 1e-12;

/// Raised for malformed states, ops, or label wiring.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Quadrature { X, Y };

/// Ordered, unique mode labels. Mode k owns slots 2k (X) and 2k+1 (Y).
class ModeRegistry {
 public:
  ModeRegistry() = default;
  explicit ModeRegistry(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  std::size_t dimension() const { return 2 * labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  bool contains(std::string_view label) const { return find(label).has_value(); }
  std::optional<std::size_t> find(std::string_view label) const;
  /// Throws ModelError naming the label when absent.
  std::size_t index_of(std::string_view label) const;
  std::size_t slot(std::string_view label, Quadrature q) const {
    return 2 * index_of(label) + (q == Quadrature::Y ? 1 : 0);
  }

  ModeRegistry appended(const std::vector<std::string>& more) const;

  bool operator==(const ModeRegistry&) const = default;

 private:
  std::vector<std::string> labels_;
};

struct QuadratureTerm {
  std::string label;
  Quadrature quadrature;
  double weight;
};

/// Coefficient vector over the registry's slots for a linear combination of
/// quadratures. Repeated terms accumulate.
Vector quadrature_coeffs(const ModeRegistry& registry, std::span<const QuadratureTerm> terms);
inline Vector quadrature_coeffs(const ModeRegistry& registry,
                                std::initializer_list<QuadratureTerm> terms) {
  return quadrature_coeffs(registry, std::span<const QuadratureTerm>(terms.begin(), terms.size()));
}

class GaussianState {
 public:
  /// The covariance is symmetrized; an asymmetry above kSymmetryTolerance is
  /// rejected rather than averaged away. Physicality is not enforced here, see
  /// check_physicality.
  GaussianState(ModeRegistry registry, Vector mean, Matrix cov);

  const ModeRegistry& registry() const { return registry_; }
  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }
  std::size_t num_modes() const { return registry_.size(); }

  Eigen::Vector2d mode_mean(std::string_view label) const;
  Eigen::Matrix2d mode_cov(std::string_view label) const;
  /// <a> = (<X> + i<Y>) / 2.
  std::complex<double> amplitude(std::string_view label) const;

  /// Appends vacuum modes, uncorrelated with the existing ones.
  GaussianState with_vacuum(const std::vector<std::string>& labels) const;

 private:
  ModeRegistry registry_;
  Vector mean_;
  Matrix cov_;
};

/// Block-diagonal symplectic form with per-mode blocks [[0, 1], [-1, 0]].
Matrix symplectic_form(std::size_t modes);

/// max |S Omega S^T - Omega| over entries.
double symplectic_error(const Matrix& s);

/// Affine Gaussian unitary on a subset of modes. Input i is carried into the
/// slot of output i; outputs may rename the modes they replace.
class SymplecticOp {
 public:
  SymplecticOp(std::vector<std::string> inputs, std::vector<std::string> outputs, Matrix s,
               Vector d);
  SymplecticOp(std::vector<std::string> inputs, std::vector<std::string> outputs, Matrix s);

  static SymplecticOp identity(const std::vector<std::string>& labels);
  /// Passive linear optics a_out = U a_in lifted to the real quadrature
  /// representation; U must be unitary.
  static SymplecticOp from_mode_map(std::vector<std::string> inputs,
                                    std::vector<std::string> outputs, const Eigen::MatrixXcd& u);

  const std::vector<std::string>& inputs() const { return inputs_; }
  const std::vector<std::string>& outputs() const { return outputs_; }
  const Matrix& matrix() const { return s_; }
  const Vector& displacement() const { return d_; }
  std::size_t num_modes() const { return inputs_.size(); }

  /// Same map with output rows ordered as `outputs` (a permutation of the
  /// current outputs).
  SymplecticOp with_output_order(const std::vector<std::string>& outputs) const;
  /// Same map with input columns ordered as `inputs`.
  SymplecticOp with_input_order(const std::vector<std::string>& inputs) const;

 private:
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  Matrix s_;
  Vector d_;
};

GaussianState new_vacuum(const std::vector<std::string>& labels);

/// Shifts <a> by `amplitude`: <X> += 2 Re, <Y> += 2 Im.
GaussianState displace(const GaussianState& state, std::string_view label,
                       std::complex<double> amplitude);

GaussianState apply(const GaussianState& state, const SymplecticOp& op);

/// op_late after op_early. op_late's inputs must be a permutation of
/// op_early's outputs.
SymplecticOp compose(const SymplecticOp& op_late, const SymplecticOp& op_early);

/// coeffs^T cov coeffs.
double quadrature_variance(const GaussianState& state, const Vector& coeffs);

/// Symplectic spectrum, ascending, one value per mode.
Vector symplectic_eigenvalues(const Matrix& cov);

struct PhysicalityReport {
  Vector symplectic_eigenvalues;
  double min_eigenvalue = 0.0;
  /// Threshold actually applied: kPhysicalityTolerance widened by the rounding
  /// floor of the covariance, eps * cond(V). The latter only matters for
  /// strongly squeezed states (r of order 5 and above).
  double tolerance = 0.0;
  bool physical = false;
};

PhysicalityReport check_physicality(const GaussianState& state);

}  // namespace cvepr

#endif  // CVEPR_GAUSSIAN_H
