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

// Acceptance checks. Prints one PASS/FAIL line per criterion; exits 1 when
// any selected criterion fails. `--criterion N` runs a single one.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

#include <fmt/format.h>

#include "tbvqd/bench.hpp"
#include "tbvqd/pauli.hpp"
#include "tbvqd/report.hpp"
#include "tbvqd/validate.hpp"
#include "tbvqd/vqd.hpp"

namespace tbvqd {
namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

double rayleigh(const ComplexMatrix& h, const std::vector<Complex>& a) {
  Eigen::Map<const Eigen::VectorXcd> v(a.data(), static_cast<Eigen::Index>(a.size()));
  return (v.adjoint() * h * v)(0, 0).real();
}

std::filesystem::path model_path(const char* name) {
  return std::filesystem::path(TBVQD_SOURCE_DIR) / "models" / name;
}

Outcome block_identity() {
  double worst = 0.0;
  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::uint64_t s = 0; s < 200; ++s) {
      const ComplexMatrix h = random_hermitian(n, derive_seed(101, {n, s}));
      const ComplexMatrix d = dense_matrix(qubit_hamiltonian(h));
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = 0; l < n; ++l) {
          const auto r = static_cast<Eigen::Index>(qubit_mask(n, j)), c = static_cast<Eigen::Index>(qubit_mask(n, l));
          worst = std::max(worst, std::abs(d(r, c) - h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l))));
        }
      }
    }
  }
  return {worst <= 1e-12, fmt::format("N=2..8 x 200 matrices, max entry deviation {:.2e} (tol 1e-12)", worst)};
}

Outcome constant_setting_exactness() {
  double worst = 0.0;
  std::size_t bad_provenance = 0, bad_settings = 0;
  for (std::size_t n = 2; n <= 10; ++n) {
    const ComplexMatrix h = random_hermitian(n, derive_seed(201, {n}));
    for (std::uint64_t s = 0; s < 500; ++s) {
      const StateVector st = run_circuit(build_ansatz(n, random_angles(n, derive_seed(202, {n, s}))));
      const ProtocolEvaluation ev = evaluate_protocol(st, h, MeasurementMode::exact());
      worst = std::max(worst, std::abs(ev.energy - rayleigh(h, st.single_excitation_amplitudes())));
      if (ev.settings.size() != 3) ++bad_settings;
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = j + 2; l < n; l += 2) {
          if (ev.correlators.provenance(j, l) != Provenance::ProductRule) ++bad_provenance;
        }
      }
    }
  }
  return {worst <= 1e-12 && bad_provenance == 0 && bad_settings == 0,
          fmt::format("N=2..10 x 500 angles, max |E - a^H a| {:.2e} (tol 1e-12), same-parity pairs not via product "
                      "rule: {}, evaluations with != 3 settings: {}",
                      worst, bad_provenance, bad_settings)};
}

Outcome zero_amplitude_branch() {
  const std::size_t n = 4;
  std::mt19937_64 rng(301);
  std::uniform_real_distribution<double> mag(0.2, 1.0), ph(-kPi, kPi);
  double worst = 0.0;
  std::size_t patterns = 0;
  for (unsigned mask = 1; mask < 15; ++mask) {
    ++patterns;
    for (std::uint64_t s = 0; s < 25; ++s) {
      const ComplexMatrix h = random_hermitian(n, derive_seed(302, {mask, s}));
      std::vector<Complex> a(n);
      for (std::size_t j = 0; j < n; ++j) a[j] = ((mask >> j) & 1U) ? Complex{} : std::polar(mag(rng), ph(rng));
      const StateVector st = run_circuit(build_ansatz(n, ansatz_angles_for(a)));
      const ProtocolEvaluation ev = evaluate_protocol(st, h, MeasurementMode::exact());
      worst = std::max(worst, std::abs(ev.energy - rayleigh(h, st.single_excitation_amplitudes())));
    }
  }
  // All four amplitudes zero is not a state, so h = 4 has no instance.
  return {worst <= 1e-12 && patterns == 14,
          fmt::format("N=4, {} zero patterns (h=1..3) x 25, max |E - a^H a| {:.2e} (tol 1e-12); h=4 has no normalized "
                      "state",
                      patterns, worst)};
}

double parity(const StateVector& st, const Circuit& rot, std::uint64_t shots, std::uint64_t seed, std::size_t j,
              std::size_t l) {
  const StateVector out = apply_circuit(st, rot);
  if (shots == 0) return estimate_pair_parity(OutcomeFrequencies::exact(out), j, l);
  return estimate_pair_parity(sample(out, shots, seed), j, l);
}

Outcome antisymmetry() {
  double worst = 0.0;
  for (std::size_t n = 2; n <= 10; ++n) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const StateVector st = run_circuit(build_ansatz(n, random_angles(n, derive_seed(401, {n, s}))));
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = 0; l < n; ++l) {
          if (j == l) continue;
          const double xy = parity(st, Circuit(n).hadamard(j).sdg_h(l), 0, 0, j, l);
          const double yx = parity(st, Circuit(n).sdg_h(j).hadamard(l), 0, 0, j, l);
          worst = std::max(worst, std::abs(xy + yx));
        }
      }
    }
  }

  const std::uint64_t shots = 100000;
  std::mt19937_64 rng(402);
  std::uniform_int_distribution<std::size_t> pick_n(2, 10);
  std::size_t within = 0;
  const std::size_t pairs = 1000;
  for (std::size_t t = 0; t < pairs; ++t) {
    const std::size_t n = pick_n(rng);
    std::uniform_int_distribution<std::size_t> q(0, n - 1);
    const std::size_t j = q(rng);
    std::size_t l = q(rng);
    while (l == j) l = q(rng);
    const StateVector st = run_circuit(build_ansatz(n, random_angles(n, derive_seed(403, {t}))));
    const double xy = parity(st, Circuit(n).hadamard(j).sdg_h(l), shots, derive_seed(404, {t, 0}), j, l);
    const double yx = parity(st, Circuit(n).sdg_h(j).hadamard(l), shots, derive_seed(404, {t, 1}), j, l);
    const double se = std::sqrt((1.0 - xy * xy + 1.0 - yx * yx) / static_cast<double>(shots));
    if (std::abs(xy + yx) <= 5.0 * se) ++within;
  }
  const double frac = static_cast<double>(within) / static_cast<double>(pairs);
  return {worst <= 1e-12 && frac >= 0.99,
          fmt::format("analytic N<=10 all ordered pairs max |<XY>+<YX>| {:.2e} (tol 1e-12); shot mode 1e5 shots: "
                      "{}/{} pairs within 5 SE ({:.1f}%, need >= 99%)",
                      worst, within, pairs, 100.0 * frac)};
}

struct SweepSummary {
  double max_error = 0.0;
  double fraction_within = 0.0;
  std::size_t kpoints = 0;
  std::size_t failures = 0;
  int restarts = 0;
};

SweepSummary summarize(const BandStructureResult& r) {
  SweepSummary s;
  s.kpoints = r.kpoints.size();
  s.failures = r.failures;
  std::size_t within = 0;
  for (const auto& p : r.points) {
    const double e = p.failed ? INFINITY : std::abs(p.energy_vqd - p.energy_exact);
    s.max_error = std::max(s.max_error, e);
    within += e < 0.05 ? 1 : 0;
  }
  s.fraction_within = r.points.empty() ? 0.0 : static_cast<double>(within) / static_cast<double>(r.points.size());
  return s;
}

SweepSummary analytic_sweep(const TightBindingModel& m) {
  SweepSummary s;
  for (int restarts = 0; restarts <= 5; ++restarts) {
    RunConfig cfg;
    cfg.analytic = true;
    cfg.restarts = restarts;
    s = summarize(band_sweep(m, model_kpath(m), cfg));
    s.restarts = restarts;
    if (s.max_error < 1e-5 && s.failures == 0) break;
  }
  return s;
}

BandStructureResult shot_sweep(const TightBindingModel& m) {
  RunConfig cfg;
  cfg.shots = 20000;
  cfg.restarts = 5;
  return band_sweep(m, model_kpath(m), cfg);
}

Outcome band_reproduction() {
  Outcome o;
  for (const char* name : {"cuo2.toml", "graphene_bilayer.toml"}) {
    const TightBindingModel m = load_model(model_path(name));
    const SweepSummary a = analytic_sweep(m);
    const SweepSummary s = summarize(shot_sweep(m));
    const bool ok_a = a.max_error < 1e-5 && a.failures == 0 && a.kpoints >= 60;
    const bool ok_s = s.fraction_within >= 0.95 && s.failures == 0;
    o.passed = o.passed && ok_a && ok_s;
    o.detail += fmt::format(
        "{}{}: analytic {} k-points, max err {:.2e} eV with {} restarts [{}]; shot 2e4: {:.1f}% of points within "
        "0.05 eV with 5 restarts (need >= 95%), max err {:.3f} eV [{}]",
        o.detail.empty() ? "" : "; ", m.name(), a.kpoints, a.max_error, a.restarts, ok_a ? "ok" : "fail",
        100.0 * s.fraction_within, s.max_error, ok_s ? "ok" : "fail");
  }
  return o;
}

Outcome correlator_statistics() {
  TrialConfig cfg;  // pairs (0,4), (1,3); N = 4..14; 1e4 shots; M = 50
  const TrialResult r = correlator_trials(cfg);
  std::size_t bad_mean = 0, bad_sigma = 0;
  double worst_rel = 0.0, sig_lo = INFINITY, sig_hi = 0.0, worst_ratio = 0.0;
  for (const auto& [j, l] : cfg.pairs) {
    double lo_re = INFINITY, hi_re = 0.0, lo_im = INFINITY, hi_im = 0.0;
    for (const auto& s : r.stats) {
      if (s.j != j || s.l != l) continue;
      const double rel = std::abs(s.mean - s.exact) / std::max(std::abs(s.exact), 0.1);
      worst_rel = std::max(worst_rel, rel);
      bad_mean += rel > 0.02 ? 1 : 0;
      for (double sd : {s.std_re, s.std_im}) {
        bad_sigma += (sd < 0.005 || sd > 0.03) ? 1 : 0;
        sig_lo = std::min(sig_lo, sd);
        sig_hi = std::max(sig_hi, sd);
      }
      lo_re = std::min(lo_re, s.std_re);
      hi_re = std::max(hi_re, s.std_re);
      lo_im = std::min(lo_im, s.std_im);
      hi_im = std::max(hi_im, s.std_im);
    }
    worst_ratio = std::max({worst_ratio, hi_re / lo_re, hi_im / lo_im});
  }
  return {bad_mean == 0 && bad_sigma == 0 && worst_ratio <= 2.0,
          fmt::format("{} cells ({} skipped); (a) worst |mean-exact|/max(|exact|,0.1) {:.2f}% (<= 2%); (b) sigma "
                      "range [{:.4f}, {:.4f}] (within [0.005, 0.03]); (c) worst max/min sigma ratio {:.2f} (<= 2)",
                      r.stats.size(), r.notes.size(), 100.0 * worst_rel, sig_lo, sig_hi, worst_ratio)};
}

Outcome execution_counts() {
  std::vector<std::size_t> ns;
  for (std::size_t n = 2; n <= 14; ++n) ns.push_back(n);
  const std::vector<std::uint64_t> shots{1000, 10000, 20000, 100000, 1000000};
  std::size_t bad = 0, rows = 0;
  for (const auto& r : execution_report(ns, shots)) {
    ++rows;
    if (r.total_constant != 3 * r.shots || r.total_conventional != (2 * r.n_qubits + 1) * r.shots) ++bad;
  }
  return {bad == 0 && rows == ns.size() * shots.size(),
          fmt::format("{} (N, shots) rows, {} mismatches against 3*S and (2N+1)*S", rows, bad)};
}

Outcome determinism() {
  Outcome o;
  for (const char* name : {"cuo2.toml", "graphene_bilayer.toml"}) {
    const TightBindingModel m = load_model(model_path(name));
    const std::string a = bands_table(shot_sweep(m)).str();
    const std::string b = bands_table(shot_sweep(m)).str();
    const bool same = a == b;
    o.passed = o.passed && same;
    o.detail += fmt::format("{}{}: {} bytes, {}", o.detail.empty() ? "" : "; ", m.name(), a.size(),
                            same ? "identical" : "differ");
  }
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace tbvqd

int main(int argc, char** argv) {
  using namespace tbvqd;
  const std::vector<Criterion> all{
      {1, "single-excitation block identity", block_identity},
      {2, "constant-setting exactness", constant_setting_exactness},
      {3, "zero-amplitude branch", zero_amplitude_branch},
      {4, "antisymmetry", antisymmetry},
      {5, "band-structure reproduction", band_reproduction},
      {6, "correlator statistics", correlator_statistics},
      {7, "execution-count report", execution_counts},
      {8, "determinism", determinism},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      fmt::print(stderr, "usage: {} [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(all.size())) {
    fmt::print(stderr, "criterion must be in 1..{}\n", all.size());
    return 2;
  }

  bool ok = true;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    fmt::print("criterion {} {}: {} ({:.1f} s) - {}\n", c.id, c.title, o.passed ? "PASS" : "FAIL", secs, o.detail);
    ok = ok && o.passed;
  }
  return ok ? 0 : 1;
}
