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

#include "tbvqd/validate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "tbvqd/pauli.hpp"

namespace tbvqd {
namespace {

// Above this size the block identity is checked term by term instead of
// through the dense 2^N matrix.
constexpr std::size_t kDenseCheckMaxQubits = 10;
// Exhaustive zero patterns are enumerated up to this size.
constexpr std::size_t kZeroPatternMaxQubits = 6;

double rayleigh(const ComplexMatrix& h, std::span<const Complex> a) {
  Complex acc{0.0, 0.0};
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (std::size_t l = 0; l < a.size(); ++l) {
      acc += std::conj(a[j]) * h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) * a[l];
    }
  }
  return acc.real();
}

void record(CheckResult& c, double deviation) {
  ++c.cases;
  c.worst = std::max(c.worst, deviation);
  if (!(deviation <= c.tolerance)) c.passed = false;
}

CheckResult make(const std::string& name, std::size_t n, double tol) {
  CheckResult c;
  c.name = name;
  c.n_qubits = n;
  c.tolerance = tol;
  return c;
}

double block_identity_deviation(const ComplexMatrix& h) {
  const auto n = static_cast<std::size_t>(h.rows());
  const QubitHamiltonian q = qubit_hamiltonian(h);
  double worst = 0.0;
  if (n <= kDenseCheckMaxQubits) {
    const ComplexMatrix d = dense_matrix(q);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t l = 0; l < n; ++l) {
        const Complex e = d(static_cast<Eigen::Index>(qubit_mask(n, j)), static_cast<Eigen::Index>(qubit_mask(n, l)));
        worst = std::max(worst, std::abs(e - h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l))));
      }
    }
    return worst;
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < n; ++l) {
      Complex e = j == l ? Complex{q.constant_offset, 0.0} : Complex{0.0, 0.0};
      for (const auto& t : q.terms) e += matrix_element(t, qubit_mask(n, j), qubit_mask(n, l));
      worst = std::max(worst, std::abs(e - h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l))));
    }
  }
  return worst;
}

}  // namespace

ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto d = static_cast<Eigen::Index>(n);
  ComplexMatrix h(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    h(j, j) = u(rng);
    for (Eigen::Index l = j + 1; l < d; ++l) {
      h(j, l) = Complex{u(rng), u(rng)};
      h(l, j) = std::conj(h(j, l));
    }
  }
  return h;
}

std::vector<double> random_angles(std::size_t n_qubits, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::vector<double> t(2 * (n_qubits - 1));
  for (auto& v : t) v = u(rng);
  return t;
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string ValidationReport::table() const {
  std::string out = fmt::format("{:<24} {:>3} {:>6} {:>12} {:>10}  {}\n", "check", "N", "cases", "worst", "tol",
                                "result");
  for (const auto& c : checks) {
    out += fmt::format("{:<24} {:>3} {:>6} {:>12.3e} {:>10.1e}  {}\n", c.name, c.n_qubits, c.cases, c.worst,
                       c.tolerance, c.passed ? "PASS" : "FAIL");
  }
  std::size_t failed = 0;
  for (const auto& c : checks) failed += c.passed ? 0 : 1;
  out += fmt::format("{} checks, {} failed\n", checks.size(), failed);
  return out;
}

ValidationReport run_validation(const ValidateOptions& opts) {
  if (opts.max_qubits < kValidateMinQubits || opts.max_qubits > kValidateMaxQubits)
    throw ValidationError(fmt::format("max qubits must lie in [{}, {}], got {}", kValidateMinQubits,
                                      kValidateMaxQubits, opts.max_qubits));
  const double tol = opts.tolerance;
  ValidationReport rep;
  const MeasurementMode exact = MeasurementMode::exact();

  for (std::size_t n = kValidateMinQubits; n <= opts.max_qubits; ++n) {
    auto block = make("block_identity", n, tol);
    auto direct = make("correlator_exactness", n, tol);
    auto product = make("product_rule_exactness", n, tol);
    auto anti = make("antisymmetry", n, tol);
    auto rq = make("rayleigh_quotient", n, tol);
    auto settings = make("setting_count", n, 0.0);
    auto leak = make("leakage", n, kLeakageTolerance);

    for (std::size_t s = 0; s < opts.samples; ++s) {
      const ComplexMatrix h = random_hermitian(n, derive_seed(opts.seed, {1, n, s}));
      record(block, block_identity_deviation(h));

      const std::vector<double> theta = random_angles(n, derive_seed(opts.seed, {2, n, s}));
      const StateVector state = run_circuit(build_ansatz(n, theta));
      const std::vector<Complex> a = state.single_excitation_amplitudes();
      const ProtocolEvaluation ev = evaluate_protocol(state, h, exact, opts.protocol);

      record(rq, std::abs(ev.energy - rayleigh(h, a)));
      record(settings, ev.settings.size() == (ev.kept.size() >= 2 ? 3u : 1u) ? 0.0 : 1.0);
      record(leak, ev.amplitudes.leakage);

      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = j + 1; l < n; ++l) {
          const double dev = std::abs(ev.correlators.get(j, l) - 2.0 * std::conj(a[j]) * a[l]);
          switch (ev.correlators.provenance(j, l)) {
            case Provenance::Direct: record(direct, dev); break;
            case Provenance::ProductRule: record(product, dev); break;
            default: break;
          }
        }
      }

      // <X_j Y_l> as the protocol infers it from the XY setting, against an
      // independent <Y_j X_l> from the state.
      const auto& kept = ev.kept;
      if (kept.size() >= 2) {
        const auto xy = measure_setting(state, build_setting(SettingKind::XY, kept, n), exact, 2);
        for (std::size_t p = 0; p < kept.size(); ++p) {
          for (std::size_t q = p + 1; q < kept.size(); q += 2) {
            std::string yx(n, 'I');
            yx[kept.kept[p]] = 'Y';
            yx[kept.kept[q]] = 'X';
            const double inferred = xy_expectation(xy, kept, p, q, opts.protocol);
            const double other = expectation(PauliString::parse(yx), state.amplitudes()).real();
            record(anti, std::abs(inferred + other));
          }
        }
      }
    }
    for (auto* c : {&block, &direct, &product, &anti, &rq, &settings, &leak}) {
      if (c->cases > 0) rep.checks.push_back(*c);
    }

    if (n <= kZeroPatternMaxQubits) {
      auto zeros = make("zero_patterns", n, tol);
      const ComplexMatrix h = random_hermitian(n, derive_seed(opts.seed, {3, n}));
      std::mt19937_64 rng(derive_seed(opts.seed, {4, n}));
      std::uniform_real_distribution<double> mag(0.2, 1.0), ph(-kPi, kPi);
      const std::uint64_t full = (std::uint64_t{1} << n) - 1;
      for (std::uint64_t mask = 1; mask < full; ++mask) {  // bit j set: a_j = 0
        std::vector<Complex> target(n);
        for (std::size_t j = 0; j < n; ++j) target[j] = ((mask >> j) & 1U) ? Complex{} : std::polar(mag(rng), ph(rng));
        const StateVector state = run_circuit(build_ansatz(n, ansatz_angles_for(target)));
        const ProtocolEvaluation ev = evaluate_protocol(state, h, exact, opts.protocol);
        record(zeros, std::abs(ev.energy - rayleigh(h, state.single_excitation_amplitudes())));
        const std::size_t h_count = static_cast<std::size_t>(std::popcount(mask));
        record(zeros, ev.amplitudes.zero_set.size() == h_count ? 0.0 : 1.0);
      }
      rep.checks.push_back(zeros);
    }
  }
  return rep;
}

}  // namespace tbvqd
