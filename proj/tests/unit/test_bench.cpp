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

#include <cmath>

#include <gtest/gtest.h>

#include "tbvqd/bench.hpp"
#include "tbvqd/pauli.hpp"

namespace tbvqd {
namespace {

TEST(ExecutionReport, Examples) {
  const auto r = execution_report({3, 14}, {10000, 1000000});
  ASSERT_EQ(r.size(), 4u);
  const auto find = [&](std::size_t n, std::uint64_t s) {
    for (const auto& x : r) {
      if (x.n_qubits == n && x.shots == s) return x;
    }
    ADD_FAILURE() << "missing row";
    return ExecutionReport{};
  };
  EXPECT_EQ(find(3, 10000).total_conventional, 70000u);
  EXPECT_EQ(find(3, 10000).total_constant, 30000u);
  EXPECT_EQ(find(14, 1000000).total_conventional, 29000000u);
  EXPECT_EQ(find(14, 1000000).total_constant, 3000000u);
}

TEST(ExecutionReport, RatioGrowsLinearly) {
  std::vector<std::size_t> ns;
  for (std::size_t n = 2; n <= 20; ++n) ns.push_back(n);
  for (const auto& x : execution_report(ns, {1000})) {
    EXPECT_EQ(x.settings_constant, 3u);
    EXPECT_EQ(x.settings_conventional, 2 * x.n_qubits + 1);
    EXPECT_EQ(3 * x.total_conventional, (2 * x.n_qubits + 1) * x.total_constant);
  }
  EXPECT_EQ(executions_table(execution_report({4}, {100})).num_rows(), 2u);
}

TEST(BenchPolicy, AmplitudesNormalizedAndAboveFloor) {
  for (std::size_t n = 2; n <= 14; ++n) {
    const auto a = bench_amplitudes(n);
    ASSERT_EQ(a.size(), n);
    double s = 0.0;
    for (const auto& z : a) {
      s += std::norm(z);
      EXPECT_GT(std::abs(z), 0.05);
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
    const auto st = run_circuit(build_ansatz(n, bench_angles(n)));
    const auto got = st.single_excitation_amplitudes();
    Complex ov{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) ov += std::conj(a[j]) * got[j];
    EXPECT_NEAR(std::abs(ov), 1.0, 1e-10);
  }
}

TEST(ExactCorrelator, MatchesAmplitudeProduct) {
  for (std::size_t n = 2; n <= 8; ++n) {
    const auto st = run_circuit(build_ansatz(n, bench_angles(n)));
    const auto a = st.single_excitation_amplitudes();
    for (std::size_t l = 1; l < n; ++l) {
      EXPECT_LT(std::abs(exact_correlator(st, 0, l) - 2.0 * std::conj(a[0]) * a[l]), 1e-12);
    }
  }
}

TEST(CorrelatorTrials, AnalyticModeIsExact) {
  TrialConfig cfg;
  cfg.n_min = 5;
  cfg.n_max = 8;
  cfg.analytic = true;
  cfg.trials = 3;
  const auto r = correlator_trials(cfg);
  ASSERT_EQ(r.stats.size(), 8u);
  for (const auto& s : r.stats) {
    EXPECT_EQ(s.std_re, 0.0);
    EXPECT_EQ(s.std_im, 0.0);
    EXPECT_LT(std::abs(s.mean - s.exact), 1e-12);
  }
}

TEST(CorrelatorTrials, SkipNoteForPairsOutsideRegister) {
  TrialConfig cfg;
  cfg.n_min = 4;
  cfg.n_max = 5;
  cfg.trials = 2;
  cfg.shots = 100;
  const auto r = correlator_trials(cfg);
  // (0,4) does not fit at N=4.
  EXPECT_EQ(r.stats.size(), 3u);
  ASSERT_EQ(r.notes.size(), 1u);
  EXPECT_NE(r.notes[0].find("N = 4"), std::string::npos);
  EXPECT_EQ(r.samples.size(), 3u * 2u);
}

TEST(CorrelatorTrials, SameParityPairsOnly) {
  TrialConfig cfg;
  cfg.n_min = 6;
  cfg.n_max = 6;
  cfg.trials = 2;
  cfg.shots = 100;
  cfg.pairs = {{0, 2}, {1, 5}};
  const auto r = correlator_trials(cfg);
  ASSERT_EQ(r.stats.size(), 2u);
  for (const auto& s : r.stats) EXPECT_EQ(s.provenance, Provenance::ProductRule);
  cfg.pairs = {{0, 1}};
  EXPECT_THROW(correlator_trials(cfg), ValidationError);
}

TEST(CorrelatorTrials, UnbiasedWithinFiveStandardErrors) {
  TrialConfig cfg;
  cfg.n_min = 4;
  cfg.n_max = 10;
  cfg.trials = 50;
  const auto r = correlator_trials(cfg);
  for (const auto& s : r.stats) {
    const double m = static_cast<double>(s.trials);
    EXPECT_LE(std::abs(s.mean.real() - s.exact.real()), 5.0 * s.std_re / std::sqrt(m) + 1e-12)
        << "N=" << s.n_qubits << " (" << s.j << "," << s.l << ")";
    EXPECT_LE(std::abs(s.mean.imag() - s.exact.imag()), 5.0 * s.std_im / std::sqrt(m) + 1e-12)
        << "N=" << s.n_qubits << " (" << s.j << "," << s.l << ")";
  }
}

TEST(CorrelatorTrials, SpreadStableAcrossRegisterSize) {
  TrialConfig cfg;
  cfg.n_min = 5;
  cfg.n_max = 14;
  cfg.trials = 50;
  const auto r = correlator_trials(cfg);
  for (const auto& pair : cfg.pairs) {
    double lo = INFINITY, hi = 0.0;
    for (const auto& s : r.stats) {
      if (s.j != pair.first || s.l != pair.second) continue;
      const double sd = std::hypot(s.std_re, s.std_im);
      lo = std::min(lo, sd);
      hi = std::max(hi, sd);
    }
    EXPECT_LE(hi / lo, 2.0) << pair.first << "," << pair.second;
  }
}

TEST(CorrelatorTrials, SeedDeterminismAndTables) {
  TrialConfig cfg;
  cfg.n_min = 5;
  cfg.n_max = 6;
  cfg.trials = 4;
  cfg.shots = 500;
  const auto a = correlator_trials(cfg);
  cfg.jobs = 1;
  const auto b = correlator_trials(cfg);
  EXPECT_EQ(correlator_dump_table(a).str(), correlator_dump_table(b).str());
  EXPECT_EQ(correlator_stats_table(a).str(), correlator_stats_table(b).str());
  EXPECT_EQ(correlator_dump_table(a).num_rows(), a.samples.size());
  EXPECT_NE(correlator_stats_svg(a, 1, 3).find("<svg"), std::string::npos);
}

}  // namespace
}  // namespace tbvqd
