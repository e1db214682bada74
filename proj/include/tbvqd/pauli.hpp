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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tbvqd/common.hpp"
#include "tbvqd/tbmodel.hpp"

namespace tbvqd {

enum class Pauli : char { I = 'I', X = 'X', Y = 'Y', Z = 'Z' };

/// Weighted tensor product of single-qubit Paulis. letters[0] acts on qubit 0,
/// which is also the leftmost character of the string form.
struct PauliString {
  std::vector<Pauli> letters;
  Complex coefficient{1.0, 0.0};

  static PauliString parse(std::string_view letters, Complex coefficient = {1.0, 0.0});
  std::size_t num_qubits() const noexcept { return letters.size(); }
  std::string str() const;
  /// Number of non-identity letters.
  std::size_t weight() const noexcept;
};

/// On every qubit the two strings carry the same letter or at least one identity.
bool qubitwise_commute(const PauliString& a, const PauliString& b);

/// Qubit form of a single-particle Bloch Hamiltonian in the reciprocal
/// orbital mapping:
///
///   H = 1/2 sum_j e_j (I - Z_j)
///     + 1/2 sum_{j<l} Re H_jl (X_j X_l + Y_j Y_l)
///     + 1/2 sum_{j<l} Im H_jl (Y_j X_l - X_j Y_l)
///
/// The identity part is kept as `constant_offset`; terms whose coefficient is
/// below 1e-14 in magnitude are dropped.
struct QubitHamiltonian {
  std::size_t n_qubits = 0;
  std::vector<PauliString> terms;
  double constant_offset = 0.0;
};

QubitHamiltonian qubit_hamiltonian(const ComplexMatrix& h);
inline QubitHamiltonian qubit_hamiltonian(const BlochMatrix& bloch) { return qubit_hamiltonian(bloch.entries); }

enum class BasisRotation : char { None = '-', X = 'X', Y = 'Y' };

struct QwcGroup {
  std::vector<BasisRotation> rotations;  // one per qubit
  std::vector<std::size_t> members;      // indices into QubitHamiltonian::terms
};

struct QwcGrouping {
  std::vector<QwcGroup> groups;
};

/// The conventional O(N) grouping: all Z terms, all XX terms, all YY terms,
/// then for every j the groups {X_j Y_l : l > j} and {Y_j X_l : l > j}.
/// Empty groups are omitted, so generic inputs give 2N + 1 groups.
QwcGrouping qwc_groups_conventional(const QubitHamiltonian& h);

inline constexpr std::size_t kDenseMatrixMaxQubits = 14;

/// Full 2^N x 2^N operator including the constant offset. Basis index bit
/// (N - 1 - q) holds qubit q. Refuses N > 14.
ComplexMatrix dense_matrix(const QubitHamiltonian& h);

/// <row| P |col> for computational basis states, coefficient included.
Complex matrix_element(const PauliString& p, std::uint64_t row, std::uint64_t col);

/// <psi| P |psi> including the coefficient, for a full 2^N amplitude vector.
Complex expectation(const PauliString& p, std::span<const Complex> amplitudes);

/// `coeff  LETTERS` per line; Z terms by qubit, then pair terms by (j, l).
std::string dump(const QubitHamiltonian& h);

}  // namespace tbvqd
