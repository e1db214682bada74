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

#include "tbvqd/bench.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "tbvqd/parallel.hpp"
#include "tbvqd/pauli.hpp"

namespace tbvqd {
namespace {

constexpr std::uint64_t kPolicySeed = 0x7b1c0ffeeULL;
// Orbitals touched by the benchmark pairs (0,4) and (1,3) carry most of the
// weight; the rest stay above |a_j| = 0.05 so the product rule stays active.
constexpr std::uint64_t kHeavyMask = 0b11011;

double population_std(const std::vector<double>& v, double mean) {
  bool all_equal = true;
  for (double x : v) all_equal = all_equal && x == v.front();
  if (all_equal) return 0.0;
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

double mean_of(const std::vector<double>& v) {
  bool all_equal = true;
  for (double x : v) all_equal = all_equal && x == v.front();
  if (all_equal) return v.front();
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

}  // namespace

std::vector<Complex> bench_amplitudes(std::size_t n_qubits) {
  if (n_qubits < 2) throw ValidationError("the fixed-angle policy needs at least 2 qubits");
  std::mt19937_64 rng(derive_seed(kPolicySeed, {n_qubits}));
  std::uniform_real_distribution<double> heavy(0.8, 1.2), light(0.03, 0.06), phase(-kPi, kPi);
  std::vector<double> w(n_qubits);
  double total = 0.0;
  for (std::size_t j = 0; j < n_qubits; ++j) {
    w[j] = (j < 64 && ((kHeavyMask >> j) & 1U)) ? heavy(rng) : light(rng);
    total += w[j];
  }
  std::vector<Complex> a(n_qubits);
  std::vector<double> ph(n_qubits);
  for (auto& p : ph) p = phase(rng);
  std::uniform_int_distribution<int> quadrant(0, 3);
  for (auto [j, l] : {std::pair<std::size_t, std::size_t>{0, 4}, {1, 3}}) {
    if (l < n_qubits) ph[l] = ph[j] + kPi / 4.0 + quadrant(rng) * kPi / 2.0;
  }
  for (std::size_t j = 0; j < n_qubits; ++j) a[j] = std::polar(std::sqrt(w[j] / total), ph[j]);
  return a;
}

AnsatzParams bench_angles(std::size_t n_qubits) { return ansatz_angles_for(bench_amplitudes(n_qubits)); }

Complex exact_correlator(const StateVector& state, std::size_t j, std::size_t l) {
  const std::size_t n = state.num_qubits();
  std::string xx(n, 'I'), xy(n, 'I');
  xx[j] = xx[l] = 'X';
  xy[j] = 'X';
  xy[l] = 'Y';
  const auto& amps = state.amplitudes();
  return {expectation(PauliString::parse(xx), amps).real(), expectation(PauliString::parse(xy), amps).real()};
}

TrialResult correlator_trials(const TrialConfig& cfg) {
  if (cfg.n_min < 2 || cfg.n_max < cfg.n_min || cfg.n_max > kMaxSimulatorQubits)
    throw ValidationError(fmt::format("qubit range {}..{} is invalid", cfg.n_min, cfg.n_max));
  if (cfg.trials < 2) throw ValidationError("at least 2 trials are required");
  if (!cfg.analytic && cfg.shots < 1) throw ValidationError("shots must be at least 1");
  for (const auto& [j, l] : cfg.pairs) {
    if (j >= l) throw ValidationError(fmt::format("pair ({}, {}) must satisfy j < l", j, l));
    if ((j + l) % 2 != 0)
      throw ValidationError(fmt::format("pair ({}, {}) has different parity; the product rule is not exercised", j, l));
  }

  TrialResult res;
  const std::size_t sizes = cfg.n_max - cfg.n_min + 1;
  // evals[s][t] holds the correlator set of trial t at N = n_min + s.
  std::vector<std::vector<CorrelatorSet>> evals(sizes, std::vector<CorrelatorSet>(cfg.trials));
  std::vector<StateVector> states;
  for (std::size_t s = 0; s < sizes; ++s) {
    const std::size_t n = cfg.n_min + s;
    states.push_back(run_circuit(build_ansatz(n, bench_angles(n))));
  }

  parallel_for(sizes * cfg.trials, cfg.jobs, [&](std::size_t idx) {
    const std::size_t s = idx / cfg.trials, t = idx % cfg.trials;
    const std::size_t n = cfg.n_min + s;
    const MeasurementMode mode = cfg.analytic ? MeasurementMode::exact()
                                              : MeasurementMode::sampled(cfg.shots, derive_seed(cfg.base_seed, {n, t}));
    evals[s][t] = evaluate_protocol(states[s], ComplexMatrix::Zero(static_cast<Eigen::Index>(n),
                                                                   static_cast<Eigen::Index>(n)),
                                    mode, cfg.protocol)
                      .correlators;
  });

  for (const auto& [j, l] : cfg.pairs) {
    for (std::size_t s = 0; s < sizes; ++s) {
      const std::size_t n = cfg.n_min + s;
      if (l >= n) {
        res.notes.push_back(fmt::format("C_{}{} skipped at N = {}: needs N >= {}", j, l, n, l + 1));
        continue;
      }
      TrialStats st;
      st.n_qubits = n;
      st.j = j;
      st.l = l;
      st.trials = cfg.trials;
      st.shots = cfg.analytic ? 0 : cfg.shots;
      st.exact = exact_correlator(states[s], j, l);
      st.provenance = evals[s][0].provenance(j, l);
      std::vector<double> re, im;
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        const Complex c = evals[s][t].get(j, l);
        re.push_back(c.real());
        im.push_back(c.imag());
        res.samples.push_back({n, j, l, evals[s][t].provenance(j, l), c, st.exact,
                               cfg.analytic ? 0 : derive_seed(cfg.base_seed, {n, t})});
      }
      st.mean = {mean_of(re), mean_of(im)};
      st.std_re = population_std(re, st.mean.real());
      st.std_im = population_std(im, st.mean.imag());
      res.stats.push_back(st);
    }
  }
  return res;
}

std::vector<ExecutionReport> execution_report(const std::vector<std::size_t>& n_qubits,
                                              const std::vector<std::uint64_t>& shots) {
  std::vector<ExecutionReport> out;
  for (std::uint64_t s : shots) {
    for (std::size_t n : n_qubits) {
      ExecutionReport r;
      r.n_qubits = n;
      r.shots = s;
      r.settings_conventional = 2 * static_cast<std::uint64_t>(n) + 1;
      r.total_constant = r.settings_constant * s;
      r.total_conventional = r.settings_conventional * s;
      out.push_back(r);
    }
  }
  return out;
}

CsvTable correlator_stats_table(const TrialResult& r) {
  CsvTable t({"n_qubits", "j", "l", "part", "mean", "std", "exact", "abs_err", "shots", "M"});
  for (const auto& s : r.stats) {
    const std::string n = std::to_string(s.n_qubits), j = std::to_string(s.j), l = std::to_string(s.l);
    t.row({n, j, l, "re", format_number(s.mean.real()), format_number(s.std_re), format_number(s.exact.real()),
           format_number(std::abs(s.mean.real() - s.exact.real())), std::to_string(s.shots),
           std::to_string(s.trials)});
    t.row({n, j, l, "im", format_number(s.mean.imag()), format_number(s.std_im), format_number(s.exact.imag()),
           format_number(std::abs(s.mean.imag() - s.exact.imag())), std::to_string(s.shots),
           std::to_string(s.trials)});
  }
  return t;
}

CsvTable executions_table(const std::vector<ExecutionReport>& rows) {
  CsvTable t({"n_qubits", "shots", "protocol", "total"});
  for (const auto& r : rows) {
    t.row({std::to_string(r.n_qubits), std::to_string(r.shots), "conventional",
           std::to_string(r.total_conventional)});
    t.row({std::to_string(r.n_qubits), std::to_string(r.shots), "constant", std::to_string(r.total_constant)});
  }
  return t;
}

CsvTable correlator_dump_table(const TrialResult& r) {
  CsvTable t({"n_qubits", "j", "l", "provenance", "re", "im", "re_exact", "im_exact", "seed"});
  for (const auto& s : r.samples) {
    t.row({std::to_string(s.n_qubits), std::to_string(s.j), std::to_string(s.l), std::string(to_string(s.provenance)),
           format_number(s.value.real()), format_number(s.value.imag()), format_number(s.exact.real()),
           format_number(s.exact.imag()), std::to_string(s.seed)});
  }
  return t;
}

std::string correlator_stats_svg(const TrialResult& r, std::size_t j, std::size_t l) {
  ChartSeries exact_re{"exact re", {}, {}, "#000000", true, false};
  ChartSeries exact_im{"exact im", {}, {}, "#555555", true, false};
  ChartSeries mean_re{"mean re", {}, {}, "#c0392b", false, true};
  ChartSeries mean_im{"mean im", {}, {}, "#1f4e9c", false, true};
  ChartSeries hi_re{"re +/- std", {}, {}, "#e8a09a", true, false}, lo_re{"re +/- std", {}, {}, "#e8a09a", true, false};
  ChartSeries hi_im{"im +/- std", {}, {}, "#9ab4e8", true, false}, lo_im{"im +/- std", {}, {}, "#9ab4e8", true, false};
  for (const auto& s : r.stats) {
    if (s.j != j || s.l != l) continue;
    const double x = static_cast<double>(s.n_qubits);
    for (auto* c : {&exact_re, &exact_im, &mean_re, &mean_im, &hi_re, &lo_re, &hi_im, &lo_im}) c->x.push_back(x);
    exact_re.y.push_back(s.exact.real());
    exact_im.y.push_back(s.exact.imag());
    mean_re.y.push_back(s.mean.real());
    mean_im.y.push_back(s.mean.imag());
    hi_re.y.push_back(s.mean.real() + s.std_re);
    lo_re.y.push_back(s.mean.real() - s.std_re);
    hi_im.y.push_back(s.mean.imag() + s.std_im);
    lo_im.y.push_back(s.mean.imag() - s.std_im);
  }
  return svg_chart({hi_re, lo_re, hi_im, lo_im, exact_re, exact_im, mean_re, mean_im},
                   {fmt::format("Correlator C_{}{}", j, l), "number of qubits N", "value"});
}

std::string executions_svg(const std::vector<ExecutionReport>& rows) {
  std::vector<ChartSeries> series;
  const char* colors[] = {"#c0392b", "#1f4e9c", "#27ae60", "#8e44ad", "#d35400"};
  std::vector<std::uint64_t> shot_values;
  for (const auto& r : rows) {
    if (std::find(shot_values.begin(), shot_values.end(), r.shots) == shot_values.end()) shot_values.push_back(r.shots);
  }
  for (std::size_t i = 0; i < shot_values.size(); ++i) {
    ChartSeries conv{fmt::format("conventional, {} shots", shot_values[i]), {}, {}, colors[i % 5], true, true};
    ChartSeries cons{fmt::format("constant, {} shots", shot_values[i]), {}, {}, colors[i % 5], true, false};
    for (const auto& r : rows) {
      if (r.shots != shot_values[i]) continue;
      conv.x.push_back(static_cast<double>(r.n_qubits));
      conv.y.push_back(static_cast<double>(r.total_conventional));
      cons.x.push_back(static_cast<double>(r.n_qubits));
      cons.y.push_back(static_cast<double>(r.total_constant));
    }
    series.push_back(std::move(conv));
    series.push_back(std::move(cons));
  }
  ChartOptions o{"Circuit executions per cost evaluation", "number of qubits N", "total executions"};
  o.log_y = true;
  o.width = 820;
  return svg_chart(series, o);
}

}  // namespace tbvqd
