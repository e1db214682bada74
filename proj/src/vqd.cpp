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

#include "tbvqd/vqd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "tbvqd/parallel.hpp"

namespace tbvqd {
namespace {

// Tag of the fresh evaluation that produces the reported energy.
constexpr std::uint64_t kFinalEvalTag = 0xf17a1ULL;

std::size_t resolve_levels(const DeflationConfig& dcfg, std::size_t n) {
  if (dcfg.max_levels > n)
    throw ValidationError(fmt::format("max_levels {} exceeds the {} orbitals of the model", dcfg.max_levels, n));
  return dcfg.max_levels == 0 ? n : dcfg.max_levels;
}

void validate(const RunConfig& cfg) {
  if (!cfg.analytic && cfg.shots < 1) throw ValidationError("shots must be at least 1");
  if (cfg.max_iterations < 1) throw ValidationError("max_iterations must be at least 1");
  if (cfg.restarts < 0) throw ValidationError("restarts must be non-negative");
}

}  // namespace

constexpr double kBetaMargin = 1.1;

double default_beta(const ComplexMatrix& h) {
  double row = 0.0, diag = 0.0;
  for (Eigen::Index j = 0; j < h.rows(); ++j) {
    row = std::max(row, h.row(j).cwiseAbs().sum());
    diag = std::max(diag, std::abs(h(j, j)));
  }
  // The bound is attained when the diagonal vanishes (chain at k = 0), and
  // beta equal to the gap leaves the deflated landscape flat.
  return kBetaMargin * 2.0 * (row + diag);
}

OptimizerOptions optimizer_options(const RunConfig& cfg) {
  OptimizerOptions o;
  o.max_iterations = cfg.max_iterations;
  o.initial_radius = cfg.initial_radius;
  if (cfg.analytic) {
    o.stencil_width = cfg.stencil_width.value_or(0.2);
    o.step_tolerance = cfg.step_tolerance.value_or(1e-8);
    o.objective_tolerance = cfg.objective_tolerance.value_or(1e-13);
  } else {
    o.stencil_width = cfg.stencil_width.value_or(0.5);
    o.min_stencil_width = o.stencil_width;
    o.noisy = true;
    o.step_tolerance = cfg.step_tolerance.value_or(1e-2);
    o.objective_tolerance = cfg.objective_tolerance.value_or(1e-4);
  }
  return o;
}

std::vector<Complex> normalized(std::span<const Complex> a) {
  double s = 0.0;
  for (const auto& z : a) s += std::norm(z);
  std::vector<Complex> out(a.begin(), a.end());
  if (s > 0.0) {
    const double inv = 1.0 / std::sqrt(s);
    for (auto& z : out) z *= inv;
  }
  return out;
}

double overlap_squared(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw ValidationError("overlap of vectors with different lengths");
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return std::norm(acc);
}

DeflatedCost deflated_cost(std::span<const double> theta, const ComplexMatrix& h,
                           std::span<const std::vector<Complex>> priors, double beta, const MeasurementMode& mode,
                           const ProtocolOptions& opts) {
  const auto n = static_cast<std::size_t>(h.rows());
  const ProtocolEvaluation ev = evaluate_protocol(build_ansatz(n, theta), h, mode, opts);
  DeflatedCost out;
  out.energy = ev.energy;
  out.leakage = ev.amplitudes.leakage;
  out.clipped = ev.correlators.clipped;
  out.amplitudes = normalized(reconstruct_state(ev.amplitudes, ev.correlators));
  for (const auto& p : priors) out.penalty += beta * overlap_squared(p, out.amplitudes);
  out.value = out.energy + out.penalty;
  return out;
}

double analytic_energy(const ComplexMatrix& h, std::span<const double> theta) {
  return evaluate_protocol(build_ansatz(static_cast<std::size_t>(h.rows()), theta), h, MeasurementMode::exact())
      .energy;
}

double BandStructureResult::max_abs_error() const {
  double worst = 0.0;
  for (const auto& p : points) {
    if (p.failed) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(p.energy_vqd - p.energy_exact));
  }
  return worst;
}

std::vector<BandPoint> solve_kpoint(const ComplexMatrix& h, std::size_t k_index,
                                    const std::vector<std::vector<double>>& starts, const RunConfig& cfg,
                                    const DeflationConfig& dcfg, std::size_t* clipped) {
  validate(cfg);
  const auto n = static_cast<std::size_t>(h.rows());
  const std::size_t levels = resolve_levels(dcfg, n);
  const std::size_t dim = 2 * (n - 1);
  const double beta = dcfg.beta.value_or(default_beta(h));
  if (!(beta > 0.0) && levels > 1) throw ValidationError("deflation beta must be positive");
  const std::vector<double> exact = exact_bands(h);
  const OptimizerOptions oopts = optimizer_options(cfg);

  std::vector<BandPoint> out(levels);
  std::vector<std::vector<Complex>> priors;
  std::size_t clip_total = 0;
  bool chain_broken = false;

  for (std::size_t level = 0; level < levels; ++level) {
    BandPoint& bp = out[level];
    bp.k_index = k_index;
    bp.level = level;
    bp.seed = derive_seed(cfg.seed, {k_index, level});
    if (chain_broken) {
      bp.failed = true;
      bp.error = "a lower level failed at this k-point";
      continue;
    }

    std::mt19937_64 rng(bp.seed);
    std::uniform_real_distribution<double> small(-cfg.initial_perturbation, cfg.initial_perturbation);
    std::uniform_real_distribution<double> wide(-kPi, kPi);

    try {
      OptimizeResult best;
      bool have_best = false;
      for (int attempt = 0; attempt <= cfg.restarts; ++attempt) {
        std::vector<double> x0(dim);
        if (attempt == 0 && level < starts.size() && starts[level].size() == dim) {
          x0 = starts[level];
        } else if (attempt == 0) {
          for (auto& v : x0) v = small(rng);
        } else {
          for (auto& v : x0) v = wide(rng);
        }
        std::uint64_t counter = 0;
        const auto attempt_tag = static_cast<std::uint64_t>(attempt);
        Objective f = [&](std::span<const double> theta) {
          const auto mode = cfg.mode(derive_seed(bp.seed, {attempt_tag, counter++}));
          const DeflatedCost c = deflated_cost(theta, h, priors, beta, mode, cfg.protocol);
          if (c.leakage > cfg.max_leakage)
            throw NumericalError(fmt::format("leakage {:.3g} exceeds {:.3g}", c.leakage, cfg.max_leakage));
          return c.value;
        };
        OptimizeResult r = minimize(f, std::move(x0), oopts);
        bp.iterations += r.iterations;
        bp.cost_evals += r.evaluations;
        if (!have_best || r.value < best.value) {
          best = std::move(r);
          have_best = true;
        }
      }

      const DeflatedCost fin =
          deflated_cost(best.x, h, priors, beta, cfg.mode(derive_seed(bp.seed, {kFinalEvalTag})), cfg.protocol);
      ++bp.cost_evals;
      if (fin.leakage > cfg.max_leakage)
        throw NumericalError(fmt::format("leakage {:.3g} exceeds {:.3g}", fin.leakage, cfg.max_leakage));
      if (!std::isfinite(fin.energy)) throw NumericalError("non-finite final energy");
      bp.energy_vqd = fin.energy;
      bp.theta = best.x;
      bp.termination = best.termination;
      clip_total += fin.clipped;
      priors.push_back(fin.amplitudes);
    } catch (const Error& e) {
      bp.failed = true;
      bp.error = e.what();
      bp.energy_vqd = std::numeric_limits<double>::quiet_NaN();
      chain_broken = true;
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const BandPoint& a, const BandPoint& b) {
    if (a.failed != b.failed) return !a.failed;
    if (a.failed) return false;
    return a.energy_vqd < b.energy_vqd;
  });
  for (std::size_t b = 0; b < levels; ++b) {
    out[b].band = b;
    out[b].energy_exact = exact[b];
  }
  if (clipped) *clipped += clip_total;
  return out;
}

BandStructureResult band_sweep(const TightBindingModel& model, const std::vector<KVector>& path,
                               const RunConfig& cfg, const DeflationConfig& dcfg) {
  validate(cfg);
  const std::size_t n = model.num_orbitals();
  BandStructureResult res;
  res.kpoints = path;
  res.num_orbitals = n;
  res.num_levels = resolve_levels(dcfg, n);
  const std::size_t nk = path.size();

  std::vector<ComplexMatrix> hs(nk);
  res.exact.resize(nk);
  res.beta.resize(nk);
  for (std::size_t k = 0; k < nk; ++k) {
    hs[k] = bloch_matrix(model, path[k]).entries;
    res.exact[k] = exact_bands(hs[k]);
    res.beta[k] = dcfg.beta.value_or(default_beta(hs[k]));
  }

  std::vector<std::vector<BandPoint>> rows(nk);
  std::vector<std::size_t> clipped(nk, 0);
  if (cfg.warm_start) {
    std::vector<std::vector<double>> starts;
    for (std::size_t k = 0; k < nk; ++k) {
      rows[k] = solve_kpoint(hs[k], k, starts, cfg, dcfg, &clipped[k]);
      // Warm start by deflation level; keep the previous start when a level failed.
      starts.resize(res.num_levels);
      for (const auto& p : rows[k]) {
        if (!p.failed) starts[p.level] = p.theta;
      }
    }
  } else {
    parallel_for(nk, cfg.jobs, [&](std::size_t k) { rows[k] = solve_kpoint(hs[k], k, {}, cfg, dcfg, &clipped[k]); });
  }

  for (std::size_t k = 0; k < nk; ++k) {
    for (auto& p : rows[k]) {
      p.path_distance = path[k].path_distance;
      res.failures += p.failed ? 1 : 0;
      res.points.push_back(std::move(p));
    }
    res.clipped_correlators += clipped[k];
  }
  return res;
}

}  // namespace tbvqd
