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

// Tight-binding models in reciprocal space.
//
// A model stores every physical hopping exactly once as (j, l, R, t): orbital
// j of the home cell couples to orbital l of the cell displaced by R. The
// Bloch matrix is
//
//   H_jl(k) = sum_R t e^{+i k.R_cart}   (plus the implied Hermitian partner),
//
// with R_cart = sum_d R_d * a_d. Positions of orbitals inside the cell do not
// enter the phase, so H(k + G) = H(k) for every reciprocal lattice vector G.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tbvqd/common.hpp"

namespace tbvqd {

struct Orbital {
  std::string label;
  double onsite_energy = 0.0;  // eV
};

struct HoppingTerm {
  std::size_t from = 0;               // j
  std::size_t to = 0;                 // l
  std::vector<int> displacement;      // R in lattice coordinates
  Complex amplitude{0.0, 0.0};        // t_jl, eV
};

struct KVector {
  RealVector components;  // Cartesian, 1/length
  double path_distance = 0.0;
  std::string label;      // empty except at labeled path vertices
};

struct LabeledPoint {
  std::string label;
  std::vector<double> coords;
};

/// High-symmetry path stored with a model. Vertices are Cartesian.
struct KPathSpec {
  std::vector<LabeledPoint> points;
  int points_per_segment = 30;
};

class TightBindingModel {
 public:
  /// Validates every invariant; throws ValidationError.
  TightBindingModel(std::vector<RealVector> lattice_vectors, std::vector<Orbital> orbitals,
                    std::vector<HoppingTerm> hoppings, std::string name = {});

  const std::string& name() const noexcept { return name_; }
  std::size_t dimension() const noexcept { return lattice_.size(); }
  std::size_t num_orbitals() const noexcept { return orbitals_.size(); }
  const std::vector<RealVector>& lattice_vectors() const noexcept { return lattice_; }
  const std::vector<Orbital>& orbitals() const noexcept { return orbitals_; }
  const std::vector<HoppingTerm>& hoppings() const noexcept { return hoppings_; }
  std::vector<double> onsite_energies() const;

  /// b_i with a_i . b_j = 2 pi delta_ij.
  std::vector<RealVector> reciprocal_vectors() const;
  /// Cartesian k for fractional coordinates in units of the reciprocal vectors.
  RealVector fractional_to_cartesian(std::span<const double> fractional) const;
  RealVector displacement_cartesian(std::span<const int> R) const;

  const std::optional<KPathSpec>& kpath_spec() const noexcept { return kpath_; }
  void set_kpath_spec(KPathSpec spec) { kpath_ = std::move(spec); }

 private:
  std::string name_;
  std::vector<RealVector> lattice_;
  std::vector<Orbital> orbitals_;
  std::vector<HoppingTerm> hoppings_;
  std::optional<KPathSpec> kpath_;
};

struct BlochMatrix {
  KVector k;
  ComplexMatrix entries;  // eV, Hermitian
};

/// Parses a TOML model document (schema in README.md). Unknown keys are rejected.
TightBindingModel parse_model(std::string_view text, std::string_view source_name = {});
TightBindingModel load_model(const std::filesystem::path& path);

BlochMatrix bloch_matrix(const TightBindingModel& model, const KVector& k);

/// Ascending eigenvalues of a Hermitian matrix. Throws NumericalError when
/// the input deviates from Hermiticity by more than `hermitian_tol`.
std::vector<double> exact_bands(const ComplexMatrix& h, double hermitian_tol = 1e-10);
inline std::vector<double> exact_bands(const BlochMatrix& bloch) { return exact_bands(bloch.entries); }

/// Largest |H_jl - conj(H_lj)| over all entries.
double hermiticity_defect(const ComplexMatrix& h);

/// Piecewise-linear path through `points`, `points_per_segment` samples per
/// segment counting both ends, shared vertices emitted once.
std::vector<KVector> kpath(std::span<const LabeledPoint> points, int points_per_segment);

/// Path stored in the model, with an optional override of the sampling density.
std::vector<KVector> model_kpath(const TightBindingModel& model, std::optional<int> points_per_segment = {});

}  // namespace tbvqd
