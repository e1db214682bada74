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

// Dense statevector simulator with computational-basis sampling.
//
// Bit convention: qubit 0 is the leftmost character of an outcome string and
// the most significant bit of a basis index, so |e_0> on three qubits is
// "100" = index 4.
//
// Sampling uses std::mt19937_64 seeded with the caller's seed. Counts are
// drawn as a multinomial through successive conditional binomials, which has
// the same law as `shots` independent single-shot draws.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tbvqd/common.hpp"

namespace tbvqd {

using BasisIndex = std::uint64_t;

inline constexpr std::size_t kMaxSimulatorQubits = 24;

inline BasisIndex qubit_mask(std::size_t n_qubits, std::size_t qubit) {
  return BasisIndex{1} << (n_qubits - 1 - qubit);
}
inline bool qubit_set(BasisIndex index, std::size_t n_qubits, std::size_t qubit) {
  return (index & qubit_mask(n_qubits, qubit)) != 0;
}
std::string to_bitstring(BasisIndex index, std::size_t n_qubits);
BasisIndex from_bitstring(std::string_view bits);

class StateVector {
 public:
  /// |0...0>.
  explicit StateVector(std::size_t n_qubits);
  /// Takes ownership of amplitudes; size must be a power of two. Not renormalized.
  StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes);

  static StateVector basis(std::size_t n_qubits, BasisIndex index);
  /// Normalized state sum_j a_j |e_j> in the Hamming-weight-1 sector.
  static StateVector single_excitation(std::span<const Complex> a);

  std::size_t num_qubits() const noexcept { return n_qubits_; }
  std::size_t dimension() const noexcept { return amps_.size(); }
  const std::vector<Complex>& amplitudes() const noexcept { return amps_; }
  std::vector<Complex>& mutable_amplitudes() noexcept { return amps_; }
  Complex amplitude(BasisIndex i) const { return amps_.at(i); }
  double norm() const;
  /// a_j = <e_j|psi>.
  std::vector<Complex> single_excitation_amplitudes() const;

 private:
  std::size_t n_qubits_;
  std::vector<Complex> amps_;
};

enum class GateKind { Hadamard, SdgH, PauliX, Givens };

/// SdgH applies S^dagger and then H, rotating the Y eigenbasis onto Z.
///
/// Givens(theta, phi) on qubits (p, q) is, in the ordered basis
/// (|00>, |10>, |01>, |11>) of (p, q):
///
///   [ 1   0               0                0 ]
///   [ 0   c              -e^{-i phi} s     0 ]
///   [ 0   e^{i phi} s     c                0 ]
///   [ 0   0               0                1 ]
///
/// with c = cos(theta / 2), s = sin(theta / 2). It moves amplitude from p to q
/// and preserves Hamming weight.
struct Gate {
  GateKind kind = GateKind::Hadamard;
  std::array<std::size_t, 2> targets{0, 0};
  double theta = 0.0;
  double phi = 0.0;

  std::size_t arity() const noexcept { return kind == GateKind::Givens ? 2 : 1; }
};

class Circuit {
 public:
  explicit Circuit(std::size_t n_qubits = 0) : n_qubits_(n_qubits) {}

  std::size_t num_qubits() const noexcept { return n_qubits_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  bool empty() const noexcept { return gates_.empty(); }

  Circuit& hadamard(std::size_t q);
  Circuit& sdg_h(std::size_t q);
  Circuit& pauli_x(std::size_t q);
  Circuit& givens(std::size_t p, std::size_t q, double theta, double phi);
  Circuit& append(const Circuit& other);

  /// One gate per line, e.g. `GIVENS 0 1 theta=1.5 phi=0`.
  std::string str() const;

 private:
  void add(Gate g);
  std::size_t n_qubits_;
  std::vector<Gate> gates_;
};

/// Angles of the Hamming-weight-preserving ansatz: (theta_i, phi_i) for the
/// block on qubits (i, i + 1), interleaved, length 2(N - 1).
struct AnsatzParams {
  std::vector<double> angles;

  static AnsatzParams zeros(std::size_t n_qubits) { return {std::vector<double>(2 * (n_qubits - 1), 0.0)}; }
  std::size_t num_qubits() const noexcept { return angles.size() / 2 + 1; }
};

/// X on qubit 0, then Givens(theta_i, phi_i) on (i, i + 1) for i = 0..N-2.
Circuit build_ansatz(std::size_t n_qubits, std::span<const double> angles);
inline Circuit build_ansatz(std::size_t n_qubits, const AnsatzParams& p) { return build_ansatz(n_qubits, p.angles); }

/// Inverse of the ansatz map: angles whose state equals `a` up to a global
/// phase (a is normalized internally; it must not be all zero).
AnsatzParams ansatz_angles_for(std::span<const Complex> a);

StateVector apply_circuit(StateVector state, const Circuit& circuit);
/// apply_circuit on |0...0>.
StateVector run_circuit(const Circuit& circuit);

struct ShotCounts {
  std::size_t n_qubits = 0;
  std::vector<std::pair<BasisIndex, std::uint64_t>> counts;  // ascending index, no zero entries
  std::uint64_t total_shots = 0;

  std::uint64_t count(BasisIndex index) const;
  std::map<std::string, std::uint64_t> by_bitstring() const;
};

ShotCounts sample(const StateVector& state, std::uint64_t shots, std::uint64_t seed);

/// |amplitude|^2 keyed by outcome string, entries below 1e-15 omitted.
std::map<std::string, double> exact_distribution(const StateVector& state);

/// Outcome weights from either sampled counts (frequencies) or exact
/// probabilities (`shots == 0`). This is what every estimator consumes.
struct OutcomeFrequencies {
  std::size_t n_qubits = 0;
  std::vector<std::pair<BasisIndex, double>> entries;  // ascending index
  std::uint64_t shots = 0;

  static OutcomeFrequencies from_counts(const ShotCounts& counts);
  /// Every outcome with nonzero probability, unrounded.
  static OutcomeFrequencies exact(const StateVector& state);

  bool analytic() const noexcept { return shots == 0; }
  double weight(BasisIndex index) const;
};

}  // namespace tbvqd
