// Copyright 2026 The tbvqd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tbvqd/tbmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include <fmt/format.h>

namespace tbvqd {

namespace {

bool is_zero_displacement(const std::vector<int>& R) {
  return std::all_of(R.begin(), R.end(), [](int r) { return r == 0; });
}

std::vector<int> negated(const std::vector<int>& R) {
  std::vector<int> out(R.size());
  std::transform(R.begin(), R.end(), out.begin(), [](int r) { return -r; });
  return out;
}

}  // namespace

TightBindingModel::TightBindingModel(std::vector<RealVector> lattice_vectors, std::vector<Orbital> orbitals,
                                     std::vector<HoppingTerm> hoppings, std::string name)
    : name_(std::move(name)),
      lattice_(std::move(lattice_vectors)),
      orbitals_(std::move(orbitals)),
      hoppings_(std::move(hoppings)) {
  const std::size_t dim = lattice_.size();
  if (dim < 1 || dim > 3) throw ValidationError(fmt::format("lattice must have 1 to 3 vectors, got {}", dim));
  for (const auto& a : lattice_) {
    if (static_cast<std::size_t>(a.size()) != dim)
      throw ValidationError(fmt::format("lattice vector has {} components, expected {}", a.size(), dim));
  }
  Eigen::MatrixXd A(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) A.row(static_cast<Eigen::Index>(i)) = lattice_[i].transpose();
  if (std::abs(A.determinant()) < 1e-12) throw ValidationError("lattice vectors are linearly dependent");

  if (orbitals_.size() < 2) throw ValidationError(fmt::format("need at least 2 orbitals, got {}", orbitals_.size()));
  std::set<std::string> labels;
  for (const auto& o : orbitals_) {
    if (o.label.empty()) throw ValidationError("orbital label must not be empty");
    if (!labels.insert(o.label).second) throw ValidationError(fmt::format("duplicate orbital label '{}'", o.label));
    if (!std::isfinite(o.onsite_energy))
      throw ValidationError(fmt::format("orbital '{}' has a non-finite on-site energy", o.label));
  }

  std::set<std::tuple<std::size_t, std::size_t, std::vector<int>>> seen;
  for (std::size_t h = 0; h < hoppings_.size(); ++h) {
    const auto& t = hoppings_[h];
    if (t.from >= orbitals_.size() || t.to >= orbitals_.size())
      throw ValidationError(fmt::format("hopping {} references orbital index out of range ({} -> {}, N = {})", h,
                                        t.from, t.to, orbitals_.size()));
    if (t.displacement.size() != dim)
      throw ValidationError(
          fmt::format("hopping {} displacement has {} components, expected {}", h, t.displacement.size(), dim));
    if (t.amplitude == Complex{0.0, 0.0}) throw ValidationError(fmt::format("hopping {} has zero amplitude", h));
    if (!std::isfinite(t.amplitude.real()) || !std::isfinite(t.amplitude.imag()))
      throw ValidationError(fmt::format("hopping {} has a non-finite amplitude", h));
    if (t.from == t.to && is_zero_displacement(t.displacement))
      throw ValidationError(fmt::format("hopping {} is an on-site term; use the orbital's on-site energy", h));
    // The Hermitian partner (l, j, -R) is implied; storing it too is a duplicate.
    if (seen.count({t.from, t.to, t.displacement}) || seen.count({t.to, t.from, negated(t.displacement)}))
      throw ValidationError(fmt::format("hopping {} duplicates an earlier hopping or its Hermitian partner", h));
    seen.insert({t.from, t.to, t.displacement});
  }
}

std::vector<double> TightBindingModel::onsite_energies() const {
  std::vector<double> eps;
  eps.reserve(orbitals_.size());
  for (const auto& o : orbitals_) eps.push_back(o.onsite_energy);
  return eps;
}

std::vector<RealVector> TightBindingModel::reciprocal_vectors() const {
  const auto dim = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXd A(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) A.row(i) = lattice_[static_cast<std::size_t>(i)].transpose();
  // Rows of B satisfy A B^T = 2 pi I.
  const Eigen::MatrixXd B = 2.0 * kPi * A.inverse().transpose();
  std::vector<RealVector> out;
  for (Eigen::Index i = 0; i < dim; ++i) out.emplace_back(B.row(i).transpose());
  return out;
}

RealVector TightBindingModel::fractional_to_cartesian(std::span<const double> fractional) const {
  if (fractional.size() != dimension())
    throw ValidationError(
        fmt::format("k-point has {} components, model dimension is {}", fractional.size(), dimension()));
  const auto b = reciprocal_vectors();
  RealVector k = RealVector::Zero(static_cast<Eigen::Index>(dimension()));
  for (std::size_t i = 0; i < b.size(); ++i) k += fractional[i] * b[i];
  return k;
}

RealVector TightBindingModel::displacement_cartesian(std::span<const int> R) const {
  RealVector r = RealVector::Zero(static_cast<Eigen::Index>(dimension()));
  for (std::size_t i = 0; i < R.size(); ++i) r += static_cast<double>(R[i]) * lattice_[i];
  return r;
}

BlochMatrix bloch_matrix(const TightBindingModel& model, const KVector& k) {
  if (static_cast<std::size_t>(k.components.size()) != model.dimension())
    throw ValidationError(fmt::format("k-vector has {} components, model dimension is {}", k.components.size(),
                                      model.dimension()));
  const auto n = static_cast<Eigen::Index>(model.num_orbitals());
  ComplexMatrix H = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) H(j, j) = model.orbitals()[static_cast<std::size_t>(j)].onsite_energy;
  for (const auto& t : model.hoppings()) {
    const double phase = k.components.dot(model.displacement_cartesian(t.displacement));
    const Complex term = t.amplitude * std::polar(1.0, phase);
    const auto j = static_cast<Eigen::Index>(t.from);
    const auto l = static_cast<Eigen::Index>(t.to);
    H(j, l) += term;
    H(l, j) += std::conj(term);
  }
  // Self-hoppings add term + conj(term) to the diagonal; drop the rounding residue.
  for (Eigen::Index j = 0; j < n; ++j) H(j, j) = H(j, j).real();
  return BlochMatrix{k, std::move(H)};
}

double hermiticity_defect(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

std::vector<double> exact_bands(const ComplexMatrix& h, double hermitian_tol) {
  if (h.rows() != h.cols() || h.rows() == 0) throw NumericalError("exact_bands needs a non-empty square matrix");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double defect = hermiticity_defect(h);
  if (defect > hermitian_tol * scale)
    throw NumericalError(fmt::format("matrix is not Hermitian (defect {:.3g})", defect));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::stable_sort(ev.begin(), ev.end());
  return ev;
}

std::vector<KVector> kpath(std::span<const LabeledPoint> points, int points_per_segment) {
  if (points.size() < 2) throw ValidationError("a k-path needs at least 2 labeled points");
  if (points_per_segment < 2) throw ValidationError("points_per_segment must be at least 2");
  const std::size_t dim = points.front().coords.size();
  if (dim == 0) throw ValidationError("k-path points must have coordinates");
  for (const auto& p : points) {
    if (p.coords.size() != dim) throw ValidationError("k-path points have inconsistent dimensions");
  }

  auto to_vec = [](const std::vector<double>& c) {
    return RealVector(Eigen::Map<const RealVector>(c.data(), static_cast<Eigen::Index>(c.size())));
  };

  std::vector<KVector> out;
  double distance = 0.0;
  out.push_back(KVector{to_vec(points[0].coords), 0.0, points[0].label});
  for (std::size_t s = 0; s + 1 < points.size(); ++s) {
    const RealVector a = to_vec(points[s].coords);
    const RealVector b = to_vec(points[s + 1].coords);
    const double seg_len = (b - a).norm();
    for (int i = 1; i < points_per_segment; ++i) {
      const double f = static_cast<double>(i) / (points_per_segment - 1);
      KVector kv{a + f * (b - a), distance + f * seg_len, {}};
      if (i == points_per_segment - 1) kv.label = points[s + 1].label;
      out.push_back(std::move(kv));
    }
    distance += seg_len;
  }
  return out;
}

std::vector<KVector> model_kpath(const TightBindingModel& model, std::optional<int> points_per_segment) {
  if (!model.kpath_spec()) throw ValidationError("model has no [kpath] section");
  const auto& spec = *model.kpath_spec();
  return kpath(spec.points, points_per_segment.value_or(spec.points_per_segment));
}

}  // namespace tbvqd
