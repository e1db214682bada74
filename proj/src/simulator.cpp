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

#include "tbvqd/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

namespace tbvqd {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_qubit_count(std::size_t n) {
  if (n == 0 || n > kMaxSimulatorQubits)
    throw ValidationError(fmt::format("qubit count {} outside [1, {}]", n, kMaxSimulatorQubits));
}

void apply_hadamard(std::vector<Complex>& amps, BasisIndex mask) {
  for (BasisIndex i = 0; i < amps.size(); ++i) {
    if (i & mask) continue;
    const Complex a = amps[i];
    const Complex b = amps[i | mask];
    amps[i] = (a + b) * kInvSqrt2;
    amps[i | mask] = (a - b) * kInvSqrt2;
  }
}

void apply_sdg(std::vector<Complex>& amps, BasisIndex mask) {
  const Complex minus_i{0.0, -1.0};
  for (BasisIndex i = 0; i < amps.size(); ++i) {
    if (i & mask) amps[i] *= minus_i;
  }
}

void apply_pauli_x(std::vector<Complex>& amps, BasisIndex mask) {
  for (BasisIndex i = 0; i < amps.size(); ++i) {
    if (!(i & mask)) std::swap(amps[i], amps[i | mask]);
  }
}

void apply_givens(std::vector<Complex>& amps, BasisIndex mask_p, BasisIndex mask_q, double theta, double phi) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const Complex fwd = std::polar(s, phi);    // |10> -> |01>
  const Complex back = -std::polar(s, -phi);  // |01> -> |10>
  for (BasisIndex i = 0; i < amps.size(); ++i) {
    if ((i & mask_p) && !(i & mask_q)) {
      const BasisIndex j = (i & ~mask_p) | mask_q;
      const Complex a10 = amps[i];
      const Complex a01 = amps[j];
      amps[i] = c * a10 + back * a01;
      amps[j] = fwd * a10 + c * a01;
    }
  }
}

}  // namespace

std::string to_bitstring(BasisIndex index, std::size_t n_qubits) {
  std::string s(n_qubits, '0');
  for (std::size_t q = 0; q < n_qubits; ++q) {
    if (qubit_set(index, n_qubits, q)) s[q] = '1';
  }
  return s;
}

BasisIndex from_bitstring(std::string_view bits) {
  BasisIndex index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ValidationError(fmt::format("invalid outcome string '{}'", bits));
    index = (index << 1) | static_cast<BasisIndex>(c == '1');
  }
  return index;
}

StateVector::StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
  check_qubit_count(n_qubits);
  amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
  amps_[0] = 1.0;
}

StateVector::StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  check_qubit_count(n_qubits);
  if (amps_.size() != (std::size_t{1} << n_qubits))
    throw ValidationError(fmt::format("expected {} amplitudes, got {}", std::size_t{1} << n_qubits, amps_.size()));
}

StateVector StateVector::basis(std::size_t n_qubits, BasisIndex index) {
  StateVector s(n_qubits);
  if (index >= s.dimension()) throw ValidationError("basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

StateVector StateVector::single_excitation(std::span<const Complex> a) {
  const std::size_t n = a.size();
  StateVector s(n);
  s.amps_[0] = 0.0;
  double norm2 = 0.0;
  for (const auto& x : a) norm2 += std::norm(x);
  if (norm2 <= 0.0) throw ValidationError("single_excitation needs a nonzero amplitude vector");
  const double inv = 1.0 / std::sqrt(norm2);
  for (std::size_t j = 0; j < n; ++j) s.amps_[qubit_mask(n, j)] = a[j] * inv;
  return s;
}

double StateVector::norm() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

std::vector<Complex> StateVector::single_excitation_amplitudes() const {
  std::vector<Complex> a(n_qubits_);
  for (std::size_t j = 0; j < n_qubits_; ++j) a[j] = amps_[qubit_mask(n_qubits_, j)];
  return a;
}

void Circuit::add(Gate g) {
  for (std::size_t t = 0; t < g.arity(); ++t) {
    if (g.targets[t] >= n_qubits_)
      throw ValidationError(fmt::format("gate target {} out of range for {} qubits", g.targets[t], n_qubits_));
  }
  if (g.arity() == 2 && g.targets[0] == g.targets[1])
    throw ValidationError("two-qubit gate needs distinct targets");
  gates_.push_back(g);
}

Circuit& Circuit::hadamard(std::size_t q) {
  add(Gate{GateKind::Hadamard, {q, q}});
  return *this;
}

Circuit& Circuit::sdg_h(std::size_t q) {
  add(Gate{GateKind::SdgH, {q, q}});
  return *this;
}

Circuit& Circuit::pauli_x(std::size_t q) {
  add(Gate{GateKind::PauliX, {q, q}});
  return *this;
}

Circuit& Circuit::givens(std::size_t p, std::size_t q, double theta, double phi) {
  add(Gate{GateKind::Givens, {p, q}, theta, phi});
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.n_qubits_ != n_qubits_) throw ValidationError("cannot append circuits of different widths");
  gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
  return *this;
}

std::string Circuit::str() const {
  std::string out;
  for (const auto& g : gates_) {
    switch (g.kind) {
      case GateKind::Hadamard:
        out += fmt::format("H {}\n", g.targets[0]);
        break;
      case GateKind::SdgH:
        out += fmt::format("SDG_H {}\n", g.targets[0]);
        break;
      case GateKind::PauliX:
        out += fmt::format("X {}\n", g.targets[0]);
        break;
      case GateKind::Givens:
        out += fmt::format("GIVENS {} {} theta={:.17g} phi={:.17g}\n", g.targets[0], g.targets[1], g.theta, g.phi);
        break;
    }
  }
  return out;
}

Circuit build_ansatz(std::size_t n_qubits, std::span<const double> angles) {
  if (n_qubits < 2) throw ValidationError("the ansatz needs at least 2 qubits");
  if (angles.size() != 2 * (n_qubits - 1))
    throw ValidationError(
        fmt::format("ansatz on {} qubits takes {} angles, got {}", n_qubits, 2 * (n_qubits - 1), angles.size()));
  Circuit c(n_qubits);
  c.pauli_x(0);
  for (std::size_t i = 0; i + 1 < n_qubits; ++i) c.givens(i, i + 1, angles[2 * i], angles[2 * i + 1]);
  return c;
}

AnsatzParams ansatz_angles_for(std::span<const Complex> a) {
  const std::size_t n = a.size();
  if (n < 2) throw ValidationError("ansatz_angles_for needs at least 2 amplitudes");
  std::vector<double> tail(n + 1, 0.0);  // tail[i] = sum_{m >= i} |a_m|^2
  for (std::size_t i = n; i-- > 0;) tail[i] = tail[i + 1] + std::norm(a[i]);
  if (tail[0] <= 0.0) throw ValidationError("ansatz_angles_for needs a nonzero amplitude vector");

  AnsatzParams p = AnsatzParams::zeros(n);
  // Phase carried into block i; the ansatz fixes a_0 real, so start from arg(a_0).
  double carried = std::abs(a[0]) > 0.0 ? std::arg(a[0]) : 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (tail[i] <= 0.0) break;
    // atan2 keeps an all-zero tail exactly zero, where acos(|a_i| / r) would
    // leak O(1e-8) amplitude through rounding in r.
    p.angles[2 * i] = 2.0 * std::atan2(std::sqrt(tail[i + 1]), std::abs(a[i]));
    // A zero a_{i+1} leaves the carried phase untouched for the next block to set.
    const double phi = std::abs(a[i + 1]) > 0.0 ? std::arg(a[i + 1]) - carried : 0.0;
    p.angles[2 * i + 1] = phi;
    carried += phi;
  }
  return p;
}

StateVector apply_circuit(StateVector state, const Circuit& circuit) {
  if (circuit.num_qubits() != state.num_qubits())
    throw ValidationError(fmt::format("circuit acts on {} qubits, state has {}", circuit.num_qubits(),
                                      state.num_qubits()));
  const std::size_t n = state.num_qubits();
  auto& amps = state.mutable_amplitudes();
  for (const auto& g : circuit.gates()) {
    const BasisIndex m0 = qubit_mask(n, g.targets[0]);
    switch (g.kind) {
      case GateKind::Hadamard:
        apply_hadamard(amps, m0);
        break;
      case GateKind::SdgH:
        apply_sdg(amps, m0);
        apply_hadamard(amps, m0);
        break;
      case GateKind::PauliX:
        apply_pauli_x(amps, m0);
        break;
      case GateKind::Givens:
        apply_givens(amps, m0, qubit_mask(n, g.targets[1]), g.theta, g.phi);
        break;
    }
  }
  return state;
}

StateVector run_circuit(const Circuit& circuit) { return apply_circuit(StateVector(circuit.num_qubits()), circuit); }

std::uint64_t ShotCounts::count(BasisIndex index) const {
  auto it = std::lower_bound(counts.begin(), counts.end(), index,
                             [](const auto& entry, BasisIndex key) { return entry.first < key; });
  return (it != counts.end() && it->first == index) ? it->second : 0;
}

std::map<std::string, std::uint64_t> ShotCounts::by_bitstring() const {
  std::map<std::string, std::uint64_t> out;
  for (const auto& [idx, c] : counts) out.emplace(to_bitstring(idx, n_qubits), c);
  return out;
}

ShotCounts sample(const StateVector& state, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw ValidationError("sample needs at least one shot");
  const auto& amps = state.amplitudes();
  double mass = 0.0;
  for (const auto& a : amps) mass += std::norm(a);
  if (!(mass > 0.0)) throw NumericalError("cannot sample from a zero state");

  std::mt19937_64 rng(seed);
  ShotCounts out;
  out.n_qubits = state.num_qubits();
  out.total_shots = shots;

  // Index of the last outcome with nonzero probability receives the remainder.
  BasisIndex last = 0;
  for (BasisIndex i = 0; i < amps.size(); ++i) {
    if (std::norm(amps[i]) > 0.0) last = i;
  }
  std::uint64_t remaining = shots;
  double remaining_mass = mass;
  for (BasisIndex i = 0; i < amps.size() && remaining > 0; ++i) {
    const double p = std::norm(amps[i]);
    if (p <= 0.0) continue;
    std::uint64_t k = remaining;
    if (i != last) {
      const double q = std::clamp(p / remaining_mass, 0.0, 1.0);
      std::binomial_distribution<std::uint64_t> binom(remaining, q);
      k = binom(rng);
    }
    remaining_mass -= p;
    if (k > 0) {
      out.counts.emplace_back(i, k);
      remaining -= k;
    }
  }
  return out;
}

std::map<std::string, double> exact_distribution(const StateVector& state) {
  std::map<std::string, double> out;
  const auto& amps = state.amplitudes();
  for (BasisIndex i = 0; i < amps.size(); ++i) {
    const double p = std::norm(amps[i]);
    if (p >= 1e-15) out.emplace(to_bitstring(i, state.num_qubits()), p);
  }
  return out;
}

OutcomeFrequencies OutcomeFrequencies::from_counts(const ShotCounts& counts) {
  if (counts.total_shots == 0) throw ValidationError("counts with zero shots");
  OutcomeFrequencies f;
  f.n_qubits = counts.n_qubits;
  f.shots = counts.total_shots;
  const double inv = 1.0 / static_cast<double>(counts.total_shots);
  f.entries.reserve(counts.counts.size());
  for (const auto& [idx, c] : counts.counts) f.entries.emplace_back(idx, static_cast<double>(c) * inv);
  return f;
}

OutcomeFrequencies OutcomeFrequencies::exact(const StateVector& state) {
  OutcomeFrequencies f;
  f.n_qubits = state.num_qubits();
  const auto& amps = state.amplitudes();
  for (BasisIndex i = 0; i < amps.size(); ++i) {
    const double p = std::norm(amps[i]);
    if (p > 0.0) f.entries.emplace_back(i, p);
  }
  return f;
}

double OutcomeFrequencies::weight(BasisIndex index) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), index,
                             [](const auto& entry, BasisIndex key) { return entry.first < key; });
  return (it != entries.end() && it->first == index) ? it->second : 0.0;
}

}  // namespace tbvqd
