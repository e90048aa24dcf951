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

#include "cvepr/gaussian.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <unordered_set>

#include <Eigen/Eigenvalues>

namespace cvepr {

namespace {

std::string join(const std::vector<std::string>& labels) {
  std::string out;
  for (const auto& l : labels) {
    if (!out.empty()) out += ", ";
    out += l;
  }
  return out;
}

void require_unique(const std::vector<std::string>& labels, std::string_view what) {
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw ModelError(std::string(what) + ": duplicate mode label '" + l + "'");
    }
  }
}

// Column permutation taking `from` order to `to` order (both permutations of
// the same label set): result[k] = position of to[k] in from.
std::vector<std::size_t> permutation(const std::vector<std::string>& from,
                                     const std::vector<std::string>& to, std::string_view what) {
  if (from.size() != to.size()) {
    throw ModelError(std::string(what) + ": label sets differ ({" + join(from) + "} vs {" +
                     join(to) + "})");
  }
  std::vector<std::size_t> perm(to.size());
  for (std::size_t k = 0; k < to.size(); ++k) {
    auto it = std::find(from.begin(), from.end(), to[k]);
    if (it == from.end()) {
      throw ModelError(std::string(what) + ": label '" + to[k] + "' not in {" + join(from) + "}");
    }
    perm[k] = static_cast<std::size_t>(it - from.begin());
  }
  return perm;
}

// Slot-level permutation matrix P with (P v)[slot k] = v[slot perm[k]].
Matrix slot_permutation(const std::vector<std::size_t>& perm) {
  const auto n = static_cast<Eigen::Index>(2 * perm.size());
  Matrix p = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < perm.size(); ++k) {
    p(2 * k, 2 * perm[k]) = 1.0;
    p(2 * k + 1, 2 * perm[k] + 1) = 1.0;
  }
  return p;
}

}  // namespace

ModeRegistry::ModeRegistry(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw ModelError("mode registry: no modes");
  require_unique(labels_, "mode registry");
}

std::optional<std::size_t> ModeRegistry::find(std::string_view label) const {
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    if (labels_[k] == label) return k;
  }
  return std::nullopt;
}

std::size_t ModeRegistry::index_of(std::string_view label) const {
  if (auto k = find(label)) return *k;
  throw ModelError("unknown mode label '" + std::string(label) + "'");
}

ModeRegistry ModeRegistry::appended(const std::vector<std::string>& more) const {
  auto all = labels_;
  all.insert(all.end(), more.begin(), more.end());
  return ModeRegistry(std::move(all));
}

Vector quadrature_coeffs(const ModeRegistry& registry, std::span<const QuadratureTerm> terms) {
  Vector c = Vector::Zero(static_cast<Eigen::Index>(registry.dimension()));
  for (const auto& t : terms) {
    c(static_cast<Eigen::Index>(registry.slot(t.label, t.quadrature))) += t.weight;
  }
  return c;
}

GaussianState::GaussianState(ModeRegistry registry, Vector mean, Matrix cov)
    : registry_(std::move(registry)), mean_(std::move(mean)), cov_(std::move(cov)) {
  const auto n = static_cast<Eigen::Index>(registry_.dimension());
  if (n == 0) throw ModelError("gaussian state: empty registry");
  if (mean_.size() != n) throw ModelError("gaussian state: mean length does not match registry");
  if (cov_.rows() != n || cov_.cols() != n) {
    throw ModelError("gaussian state: covariance shape does not match registry");
  }
  if (!mean_.allFinite() || !cov_.allFinite()) {
    throw ModelError("gaussian state: non-finite entries");
  }
  const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance) {
    throw ModelError("gaussian state: covariance asymmetric by " + std::to_string(asym));
  }
  cov_ = (0.5 * (cov_ + cov_.transpose())).eval();
}

Eigen::Vector2d GaussianState::mode_mean(std::string_view label) const {
  const auto k = static_cast<Eigen::Index>(2 * registry_.index_of(label));
  return mean_.segment<2>(k);
}

Eigen::Matrix2d GaussianState::mode_cov(std::string_view label) const {
  const auto k = static_cast<Eigen::Index>(2 * registry_.index_of(label));
  return cov_.block<2, 2>(k, k);
}

std::complex<double> GaussianState::amplitude(std::string_view label) const {
  const auto m = mode_mean(label);
  return {m(0) / 2.0, m(1) / 2.0};
}

GaussianState GaussianState::with_vacuum(const std::vector<std::string>& labels) const {
  auto reg = registry_.appended(labels);
  const auto n = static_cast<Eigen::Index>(reg.dimension());
  const auto old = static_cast<Eigen::Index>(registry_.dimension());
  Vector mean = Vector::Zero(n);
  mean.head(old) = mean_;
  Matrix cov = Matrix::Identity(n, n);
  cov.topLeftCorner(old, old) = cov_;
  return GaussianState(std::move(reg), std::move(mean), std::move(cov));
}

Matrix symplectic_form(std::size_t modes) {
  const auto n = static_cast<Eigen::Index>(2 * modes);
  Matrix omega = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; k += 2) {
    omega(k, k + 1) = 1.0;
    omega(k + 1, k) = -1.0;
  }
  return omega;
}

double symplectic_error(const Matrix& s) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0) return INFINITY;
  const Matrix omega = symplectic_form(static_cast<std::size_t>(s.rows() / 2));
  return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff();
}

SymplecticOp::SymplecticOp(std::vector<std::string> inputs, std::vector<std::string> outputs,
                           Matrix s, Vector d)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)), s_(std::move(s)), d_(std::move(d)) {
  if (inputs_.empty()) throw ModelError("symplectic op: no modes");
  if (inputs_.size() != outputs_.size()) {
    throw ModelError("symplectic op: input/output mode counts differ");
  }
  require_unique(inputs_, "symplectic op inputs");
  require_unique(outputs_, "symplectic op outputs");
  const auto n = static_cast<Eigen::Index>(2 * inputs_.size());
  if (s_.rows() != n || s_.cols() != n) throw ModelError("symplectic op: matrix shape mismatch");
  if (d_.size() != n) throw ModelError("symplectic op: displacement length mismatch");
  const double err = symplectic_error(s_);
  if (!(err < kSymplecticTolerance)) {
    throw ModelError("symplectic op: S Omega S^T deviates from Omega by " + std::to_string(err));
  }
}

SymplecticOp::SymplecticOp(std::vector<std::string> inputs, std::vector<std::string> outputs,
                           Matrix s)
    : SymplecticOp(std::move(inputs), std::move(outputs), s, Vector::Zero(s.rows())) {}

SymplecticOp SymplecticOp::identity(const std::vector<std::string>& labels) {
  const auto n = static_cast<Eigen::Index>(2 * labels.size());
  return SymplecticOp(labels, labels, Matrix::Identity(n, n));
}

SymplecticOp SymplecticOp::from_mode_map(std::vector<std::string> inputs,
                                         std::vector<std::string> outputs,
                                         const Eigen::MatrixXcd& u) {
  const auto m = static_cast<Eigen::Index>(inputs.size());
  if (u.rows() != m || u.cols() != m) throw ModelError("mode map: matrix shape mismatch");
  const double unitarity =
      (u * u.adjoint() - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff();
  if (unitarity > kSymplecticTolerance) throw ModelError("mode map: matrix is not unitary");
  // a' = (A + iB) a  =>  X' = A X - B Y,  Y' = B X + A Y.
  Matrix s(2 * m, 2 * m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < m; ++k) {
      const double a = u(j, k).real();
      const double b = u(j, k).imag();
      s(2 * j, 2 * k) = a;
      s(2 * j, 2 * k + 1) = -b;
      s(2 * j + 1, 2 * k) = b;
      s(2 * j + 1, 2 * k + 1) = a;
    }
  }
  return SymplecticOp(std::move(inputs), std::move(outputs), std::move(s));
}

SymplecticOp SymplecticOp::with_output_order(const std::vector<std::string>& outputs) const {
  const Matrix p = slot_permutation(permutation(outputs_, outputs, "output reorder"));
  return SymplecticOp(inputs_, outputs, p * s_, p * d_);
}

SymplecticOp SymplecticOp::with_input_order(const std::vector<std::string>& inputs) const {
  const Matrix p = slot_permutation(permutation(inputs_, inputs, "input reorder"));
  // New column k reads old input perm[k]: S' = S P^T.
  return SymplecticOp(inputs, outputs_, s_ * p.transpose(), d_);
}

GaussianState new_vacuum(const std::vector<std::string>& labels) {
  ModeRegistry reg(labels);
  const auto n = static_cast<Eigen::Index>(reg.dimension());
  return GaussianState(std::move(reg), Vector::Zero(n), Matrix::Identity(n, n));
}

GaussianState displace(const GaussianState& state, std::string_view label,
                       std::complex<double> amplitude) {
  const auto k = static_cast<Eigen::Index>(2 * state.registry().index_of(label));
  Vector mean = state.mean();
  mean(k) += 2.0 * amplitude.real();
  mean(k + 1) += 2.0 * amplitude.imag();
  return GaussianState(state.registry(), std::move(mean), state.cov());
}

GaussianState apply(const GaussianState& state, const SymplecticOp& op) {
  const double err = symplectic_error(op.matrix());
  if (!(err < kSymplecticTolerance)) {
    throw ModelError("apply: op is not symplectic (error " + std::to_string(err) + ")");
  }
  const auto& reg = state.registry();
  std::vector<std::size_t> idx;
  idx.reserve(op.num_modes());
  for (const auto& in : op.inputs()) idx.push_back(reg.index_of(in));

  auto labels = reg.labels();
  for (std::size_t k = 0; k < idx.size(); ++k) labels[idx[k]] = op.outputs()[k];
  for (const auto& out : op.outputs()) {
    if (std::count(labels.begin(), labels.end(), out) != 1) {
      throw ModelError("apply: output label '" + out + "' collides with an existing mode");
    }
  }

  const auto n = static_cast<Eigen::Index>(reg.dimension());
  Matrix t = Matrix::Identity(n, n);
  Vector shift = Vector::Zero(n);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      t.block<2, 2>(static_cast<Eigen::Index>(2 * idx[j]), static_cast<Eigen::Index>(2 * idx[k])) =
          op.matrix().block<2, 2>(static_cast<Eigen::Index>(2 * j),
                                  static_cast<Eigen::Index>(2 * k));
    }
    shift.segment<2>(static_cast<Eigen::Index>(2 * idx[j])) =
        op.displacement().segment<2>(static_cast<Eigen::Index>(2 * j));
  }
  return GaussianState(ModeRegistry(std::move(labels)), t * state.mean() + shift,
                       t * state.cov() * t.transpose());
}

SymplecticOp compose(const SymplecticOp& op_late, const SymplecticOp& op_early) {
  const auto late = op_late.with_input_order(op_early.outputs());
  return SymplecticOp(op_early.inputs(), late.outputs(), late.matrix() * op_early.matrix(),
                      late.matrix() * op_early.displacement() + late.displacement());
}

double quadrature_variance(const GaussianState& state, const Vector& coeffs) {
  if (coeffs.size() != state.cov().rows()) {
    throw ModelError("quadrature_variance: coefficient length " + std::to_string(coeffs.size()) +
                     " does not match state dimension " + std::to_string(state.cov().rows()));
  }
  return coeffs.dot(state.cov() * coeffs);
}

Vector symplectic_eigenvalues(const Matrix& cov) {
  const auto modes = static_cast<std::size_t>(cov.rows() / 2);
  const Matrix omega = symplectic_form(modes);
  std::vector<double> moduli;
  moduli.reserve(static_cast<std::size_t>(cov.rows()));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  if (eig.eigenvalues().minCoeff() > 0.0) {
    // Positive definite: i V^{1/2} Omega V^{1/2} is Hermitian with spectrum
    // +-nu, which stays accurate for strongly squeezed states where the
    // non-normal Omega V loses digits.
    const Matrix root = eig.operatorSqrt();
    const Eigen::MatrixXcd h = std::complex<double>(0.0, 1.0) * (root * omega * root);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> herm(h, Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < h.rows(); ++k) moduli.push_back(std::abs(herm.eigenvalues()(k)));
  } else {
    // Omega^{-1} = -Omega; eigenvalues of Omega^{-1} V come in pairs +-i nu.
    Eigen::EigenSolver<Matrix> solver(-omega * cov, false);
    for (Eigen::Index k = 0; k < cov.rows(); ++k) moduli.push_back(std::abs(solver.eigenvalues()(k)));
  }
  std::sort(moduli.begin(), moduli.end());
  Vector nu(static_cast<Eigen::Index>(modes));
  for (std::size_t k = 0; k < modes; ++k) {
    nu(static_cast<Eigen::Index>(k)) = 0.5 * (moduli[2 * k] + moduli[2 * k + 1]);
  }
  return nu;
}

PhysicalityReport check_physicality(const GaussianState& state) {
  PhysicalityReport report;
  report.symplectic_eigenvalues = symplectic_eigenvalues(state.cov());
  report.min_eigenvalue = report.symplectic_eigenvalues.minCoeff();
  // nu >= 1 alone admits indefinite matrices.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(state.cov(), Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double cond = lo > 0.0 ? hi / lo : 0.0;
  report.tolerance = kPhysicalityTolerance + std::numeric_limits<double>::epsilon() * cond;
  report.physical = lo > 0.0 && report.min_eigenvalue >= 1.0 - report.tolerance;
  return report;
}

}  // namespace cvepr
