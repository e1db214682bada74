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

// Analytic-mode invariant batteries run by `tbvqd validate`.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tbvqd/protocol.hpp"

namespace tbvqd {

struct CheckResult {
  std::string name;
  std::size_t n_qubits = 0;
  std::size_t cases = 0;
  double worst = 0.0;      // largest deviation seen
  double tolerance = 0.0;
  bool passed = true;
};

struct ValidateOptions {
  std::size_t max_qubits = 8;
  std::size_t samples = 25;  // random cases per check and N
  std::uint64_t seed = 20260101;
  double tolerance = 1e-12;
  ProtocolOptions protocol;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  /// Fixed-width pass/fail table.
  std::string table() const;
};

inline constexpr std::size_t kValidateMinQubits = 2;
inline constexpr std::size_t kValidateMaxQubits = 14;

/// Throws ValidationError when max_qubits is outside [2, 14].
ValidationReport run_validation(const ValidateOptions& opts);

/// Uniform random Hermitian matrix with entries in [-1, 1] (+ i[-1, 1]).
ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed);
/// Uniform random ansatz angles in [-pi, pi).
std::vector<double> random_angles(std::size_t n_qubits, std::uint64_t seed);

}  // namespace tbvqd
