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

#include "tbvqd/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <fmt/format.h>

namespace tbvqd {

namespace {

constexpr double kDropTolerance = 1e-14;

PauliString pair_term(std::size_t n, std::size_t j, Pauli pj, std::size_t l, Pauli pl, double coeff) {
  PauliString s;
  s.letters.assign(n, Pauli::I);
  s.letters[j] = pj;
  s.letters[l] = pl;
  s.coefficient = coeff;
  return s;
}

void push_if_nonzero(std::vector<PauliString>& terms, PauliString term) {
  if (std::abs(term.coefficient) > kDropTolerance) terms.push_back(std::move(term));
}

BasisRotation rotation_for(Pauli p) {
  switch (p) {
    case Pauli::X:
      return BasisRotation::X;
    case Pauli::Y:
      return BasisRotation::Y;
    default:
      return BasisRotation::None;
  }
}

}  // namespace

PauliString PauliString::parse(std::string_view letters, Complex coefficient) {
  PauliString s;
  s.coefficient = coefficient;
  for (char c : letters) {
    switch (c) {
      case 'I':
      case 'X':
      case 'Y':
      case 'Z':
        s.letters.push_back(static_cast<Pauli>(c));
        break;
      default:
        throw ValidationError(fmt::format("invalid Pauli letter '{}'", c));
    }
  }
  return s;
}

std::string PauliString::str() const {
  std::string out;
  out.reserve(letters.size());
  for (auto p : letters) out.push_back(static_cast<char>(p));
  return out;
}

std::size_t PauliString::weight() const noexcept {
  return static_cast<std::size_t>(std::count_if(letters.begin(), letters.end(), [](Pauli p) { return p != Pauli::I; }));
}

bool qubitwise_commute(const PauliString& a, const PauliString& b) {
  if (a.num_qubits() != b.num_qubits()) return false;
  for (std::size_t q = 0; q < a.num_qubits(); ++q) {
    if (a.letters[q] != Pauli::I && b.letters[q] != Pauli::I && a.letters[q] != b.letters[q]) return false;
  }
  return true;
}

QubitHamiltonian qubit_hamiltonian(const ComplexMatrix& h) {
  if (h.rows() != h.cols() || h.rows() < 1) throw ValidationError("qubit_hamiltonian needs a square matrix");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (hermiticity_defect(h) > 1e-10 * scale) throw NumericalError("qubit_hamiltonian: input is not Hermitian");

  const auto n = static_cast<std::size_t>(h.rows());
  QubitHamiltonian out;
  out.n_qubits = n;
  for (std::size_t j = 0; j < n; ++j) {
    const double eps = h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)).real();
    out.constant_offset += 0.5 * eps;
    PauliString z;
    z.letters.assign(n, Pauli::I);
    z.letters[j] = Pauli::Z;
    z.coefficient = -0.5 * eps;
    push_if_nonzero(out.terms, std::move(z));
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = j + 1; l < n; ++l) {
      const Complex hjl = h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l));
      push_if_nonzero(out.terms, pair_term(n, j, Pauli::X, l, Pauli::X, 0.5 * hjl.real()));
      push_if_nonzero(out.terms, pair_term(n, j, Pauli::Y, l, Pauli::Y, 0.5 * hjl.real()));
      push_if_nonzero(out.terms, pair_term(n, j, Pauli::Y, l, Pauli::X, 0.5 * hjl.imag()));
      push_if_nonzero(out.terms, pair_term(n, j, Pauli::X, l, Pauli::Y, -0.5 * hjl.imag()));
    }
  }
  return out;
}

QwcGrouping qwc_groups_conventional(const QubitHamiltonian& h) {
  const std::size_t n = h.n_qubits;
  // Slots: 0 = Z, 1 = XX, 2 = YY, then (3 + 2j) = {X_j Y_l}, (4 + 2j) = {Y_j X_l}.
  std::vector<QwcGroup> slots(3 + 2 * (n > 0 ? n - 1 : 0));
  for (auto& g : slots) g.rotations.assign(n, BasisRotation::None);

  for (std::size_t t = 0; t < h.terms.size(); ++t) {
    const auto& term = h.terms[t];
    std::vector<std::size_t> support;
    for (std::size_t q = 0; q < n; ++q) {
      if (term.letters[q] != Pauli::I) support.push_back(q);
    }
    std::size_t slot = 0;
    if (support.size() == 1 && term.letters[support[0]] == Pauli::Z) {
      slot = 0;
    } else if (support.size() == 2) {
      const Pauli a = term.letters[support[0]];
      const Pauli b = term.letters[support[1]];
      if (a == Pauli::X && b == Pauli::X) {
        slot = 1;
      } else if (a == Pauli::Y && b == Pauli::Y) {
        slot = 2;
      } else if (a == Pauli::X && b == Pauli::Y) {
        slot = 3 + 2 * support[0];
      } else if (a == Pauli::Y && b == Pauli::X) {
        slot = 4 + 2 * support[0];
      } else {
        throw ValidationError(fmt::format("term {} is not a tight-binding Hamiltonian term", term.str()));
      }
    } else {
      throw ValidationError(fmt::format("term {} is not a tight-binding Hamiltonian term", term.str()));
    }
    auto& group = slots[slot];
    group.members.push_back(t);
    for (auto q : support) group.rotations[q] = rotation_for(term.letters[q]);
  }

  QwcGrouping out;
  for (auto& g : slots) {
    if (!g.members.empty()) out.groups.push_back(std::move(g));
  }
  return out;
}

namespace {

// P|col> = phase * |col ^ flip>.
std::uint64_t flip_mask(const PauliString& p) {
  const std::size_t n = p.num_qubits();
  std::uint64_t flip = 0;
  for (std::size_t q = 0; q < n; ++q) {
    if (p.letters[q] == Pauli::X || p.letters[q] == Pauli::Y) flip |= std::uint64_t{1} << (n - 1 - q);
  }
  return flip;
}

Complex basis_phase(const PauliString& p, std::uint64_t col) {
  const std::size_t n = p.num_qubits();
  const Complex i_unit{0.0, 1.0};
  Complex phase = p.coefficient;
  for (std::size_t q = 0; q < n; ++q) {
    const bool bit = (col >> (n - 1 - q)) & 1U;
    switch (p.letters[q]) {
      case Pauli::Y:
        phase *= bit ? -i_unit : i_unit;  // Y|0> = i|1>, Y|1> = -i|0>
        break;
      case Pauli::Z:
        if (bit) phase = -phase;
        break;
      default:
        break;
    }
  }
  return phase;
}

}  // namespace

ComplexMatrix dense_matrix(const QubitHamiltonian& h) {
  const std::size_t n = h.n_qubits;
  if (n > kDenseMatrixMaxQubits)
    throw ValidationError(fmt::format("dense_matrix refuses {} qubits (limit {})", n, kDenseMatrixMaxQubits));
  const std::uint64_t dim = std::uint64_t{1} << n;
  const auto d = static_cast<Eigen::Index>(dim);
  ComplexMatrix m = ComplexMatrix::Identity(d, d) * h.constant_offset;

  for (const auto& term : h.terms) {
    if (term.num_qubits() != n) throw ValidationError("term length does not match the qubit count");
    const std::uint64_t flip = flip_mask(term);
    for (std::uint64_t col = 0; col < dim; ++col) {
      m(static_cast<Eigen::Index>(col ^ flip), static_cast<Eigen::Index>(col)) += basis_phase(term, col);
    }
  }
  return m;
}

Complex matrix_element(const PauliString& p, std::uint64_t row, std::uint64_t col) {
  return (col ^ flip_mask(p)) == row ? basis_phase(p, col) : Complex{0.0, 0.0};
}

Complex expectation(const PauliString& p, std::span<const Complex> amplitudes) {
  const std::size_t n = p.num_qubits();
  if (n >= 64 || amplitudes.size() != (std::size_t{1} << n))
    throw ValidationError(fmt::format("state of size {} does not match a {}-qubit Pauli string", amplitudes.size(), n));
  const std::uint64_t flip = flip_mask(p);
  Complex acc{0.0, 0.0};
  for (std::uint64_t col = 0; col < amplitudes.size(); ++col) {
    if (amplitudes[col] == Complex{0.0, 0.0}) continue;
    acc += std::conj(amplitudes[col ^ flip]) * basis_phase(p, col) * amplitudes[col];
  }
  return acc;
}

std::string dump(const QubitHamiltonian& h) {
  std::string out = fmt::format("# n_qubits {}  offset {:.12g}\n", h.n_qubits, h.constant_offset);
  for (const auto& t : h.terms) out += fmt::format("{:.12g}  {}\n", t.coefficient.real(), t.str());
  return out;
}

}  // namespace tbvqd
