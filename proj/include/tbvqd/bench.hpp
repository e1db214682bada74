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

// Correlator-estimation statistics and circuit-execution accounting.
//
// Fixed-angle policy: for each N the trial state has amplitudes drawn from a
// generator seeded by N alone. Orbitals 0, 1, 3 and 4 get weights in
// [0.8, 1.2], the rest get weights in [0.03, 0.06]; phases are uniform except
// that arg(a_4) - arg(a_0) and arg(a_3) - arg(a_1) are odd multiples of pi/4,
// which splits the sampling noise evenly between real and imaginary parts.
// The weights are normalized and converted to ansatz angles, so every
// |a_j| > 0.05 and the product rule is always exercised. Trials differ only
// in sampling seeds.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tbvqd/protocol.hpp"
#include "tbvqd/report.hpp"

namespace tbvqd {

/// Target amplitudes of the fixed-angle policy.
std::vector<Complex> bench_amplitudes(std::size_t n_qubits);
/// Ansatz angles that prepare bench_amplitudes(n_qubits).
AnsatzParams bench_angles(std::size_t n_qubits);

struct TrialStats {
  std::size_t n_qubits = 0;
  std::size_t j = 0, l = 0;
  Complex mean{0.0, 0.0};
  /// Population standard deviations (1/M normalization) of the parts.
  double std_re = 0.0, std_im = 0.0;
  Complex exact{0.0, 0.0};
  std::size_t trials = 0;   // M
  std::uint64_t shots = 0;  // per setting; 0 = analytic
  Provenance provenance = Provenance::Unfilled;
};

struct CorrelatorSample {
  std::size_t n_qubits = 0, j = 0, l = 0;
  Provenance provenance = Provenance::Unfilled;
  Complex value{0.0, 0.0};
  Complex exact{0.0, 0.0};
  std::uint64_t seed = 0;
};

struct TrialConfig {
  std::size_t n_min = 4, n_max = 14;
  std::vector<std::pair<std::size_t, std::size_t>> pairs{{0, 4}, {1, 3}};
  std::uint64_t shots = 10000;
  std::size_t trials = 50;
  std::uint64_t base_seed = 20260101;
  bool analytic = false;
  std::size_t jobs = 0;
  /// Unclipped by default: clipping biases |C_jl| low because a pure state
  /// sits exactly on the clip bound.
  ProtocolOptions protocol{.clip_correlators = false};
};

struct TrialResult {
  std::vector<TrialStats> stats;          // ordered by (pair, N)
  std::vector<CorrelatorSample> samples;  // every trial, same order
  std::vector<std::string> notes;         // skipped cells
};

/// Exact C_jl = <X_j X_l> + i <X_j Y_l> by Pauli expectation on the state.
Complex exact_correlator(const StateVector& state, std::size_t j, std::size_t l);

TrialResult correlator_trials(const TrialConfig& cfg);

struct ExecutionReport {
  std::size_t n_qubits = 0;
  std::uint64_t shots = 0;
  std::uint64_t settings_constant = 3;
  std::uint64_t settings_conventional = 0;  // 2N + 1
  std::uint64_t total_constant = 0;
  std::uint64_t total_conventional = 0;
};

std::vector<ExecutionReport> execution_report(const std::vector<std::size_t>& n_qubits,
                                              const std::vector<std::uint64_t>& shots);

/// n_qubits, j, l, part, mean, std, exact, abs_err, shots, M
CsvTable correlator_stats_table(const TrialResult& r);
/// n_qubits, shots, protocol, total
CsvTable executions_table(const std::vector<ExecutionReport>& rows);
/// n_qubits, j, l, provenance, re, im, re_exact, im_exact, seed
CsvTable correlator_dump_table(const TrialResult& r);

std::string correlator_stats_svg(const TrialResult& r, std::size_t j, std::size_t l);
std::string executions_svg(const std::vector<ExecutionReport>& rows);

}  // namespace tbvqd
