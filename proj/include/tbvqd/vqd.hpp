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

// Variational quantum deflation over a k-path.
//
// Level n at one k minimizes
//
//   E(theta) + beta * sum_{i<n} |<a_i, a(theta)>|^2
//
// where E is the three-setting protocol energy and a_i, a(theta) are
// amplitude vectors reconstructed from the same three settings. No overlap
// circuits are run, so every cost evaluation costs exactly three settings.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tbvqd/optimizer.hpp"
#include "tbvqd/protocol.hpp"
#include "tbvqd/tbmodel.hpp"

namespace tbvqd {

struct DeflationConfig {
  /// Penalty weight in eV; default_beta(h) per k-point when unset.
  std::optional<double> beta;
  /// Number of levels to compute; 0 means all N.
  std::size_t max_levels = 0;
};

/// 1.1 x 2 (max_j sum_l |H_jl| + max_j |H_jj|); the unscaled value bounds the
/// spectral range but can equal it.
double default_beta(const ComplexMatrix& h);

struct RunConfig {
  bool analytic = false;
  std::uint64_t shots = 20000;
  int max_iterations = 300;
  std::uint64_t seed = 20260101;
  /// Unset tolerances take mode-dependent defaults (see optimizer_options).
  std::optional<double> step_tolerance;
  std::optional<double> objective_tolerance;
  std::optional<double> stencil_width;
  double initial_radius = 0.5;
  bool warm_start = true;
  /// Extra optimizations from random angles per (k, level); the best is kept.
  int restarts = 0;
  /// Scale of the random perturbation around 0 used at the first k-point.
  double initial_perturbation = 0.1;
  /// Worker threads for cold sweeps; 0 = all cores.
  std::size_t jobs = 0;
  double max_leakage = 0.01;
  ProtocolOptions protocol;

  MeasurementMode mode(std::uint64_t seed_for_eval) const {
    return analytic ? MeasurementMode::exact() : MeasurementMode::sampled(shots, seed_for_eval);
  }
};

OptimizerOptions optimizer_options(const RunConfig& cfg);

struct DeflatedCost {
  double value = 0.0;    // energy + penalty
  double energy = 0.0;   // protocol energy
  double penalty = 0.0;
  std::vector<Complex> amplitudes;  // normalized reconstruction
  double leakage = 0.0;
  std::size_t clipped = 0;
};

/// Unit-norm copy of a (all-zero input is returned unchanged).
std::vector<Complex> normalized(std::span<const Complex> a);

/// |<a, b>|^2 for unit vectors.
double overlap_squared(std::span<const Complex> a, std::span<const Complex> b);

/// Deflated cost at angles theta. `priors` must be unit vectors.
DeflatedCost deflated_cost(std::span<const double> theta, const ComplexMatrix& h,
                           std::span<const std::vector<Complex>> priors, double beta, const MeasurementMode& mode,
                           const ProtocolOptions& opts = {});

struct BandPoint {
  std::size_t k_index = 0;
  double path_distance = 0.0;
  std::size_t band = 0;        // index after sorting
  std::size_t level = 0;       // deflation level that produced it
  double energy_vqd = 0.0;     // protocol energy at theta (NaN when failed)
  double energy_exact = 0.0;
  int iterations = 0;
  int cost_evals = 0;
  std::uint64_t seed = 0;
  std::vector<double> theta;
  std::string termination;
  bool failed = false;
  std::string error;
};

struct BandStructureResult {
  std::vector<KVector> kpoints;
  std::size_t num_orbitals = 0;
  std::size_t num_levels = 0;
  /// Row-major k x num_levels, ascending within each row (failed entries last, NaN).
  std::vector<BandPoint> points;
  /// k x N exact eigenvalues.
  std::vector<std::vector<double>> exact;
  std::vector<double> beta;  // per k-point
  std::size_t failures = 0;
  std::size_t clipped_correlators = 0;

  const BandPoint& at(std::size_t k, std::size_t band) const { return points.at(k * num_levels + band); }
  double max_abs_error() const;
};

/// Minimizes the deflated cost for every level at one k-point.
/// `starts[n]` seeds level n (empty = random perturbation around 0).
std::vector<BandPoint> solve_kpoint(const ComplexMatrix& h, std::size_t k_index,
                                    const std::vector<std::vector<double>>& starts, const RunConfig& cfg,
                                    const DeflationConfig& dcfg, std::size_t* clipped = nullptr);

BandStructureResult band_sweep(const TightBindingModel& model, const std::vector<KVector>& path,
                               const RunConfig& cfg, const DeflationConfig& dcfg = {});

/// Analytic protocol energy at theta; equals a^dagger H a of the ansatz state.
double analytic_energy(const ComplexMatrix& h, std::span<const double> theta);

}  // namespace tbvqd
