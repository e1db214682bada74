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

#include "tbvqd/protocol.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <fmt/format.h>

namespace tbvqd {

std::string_view to_string(SettingKind kind) {
  switch (kind) {
    case SettingKind::Z:
      return "Z";
    case SettingKind::XX:
      return "XX";
    case SettingKind::XY:
      return "XY";
  }
  return "?";
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Unfilled:
      return "unfilled";
    case Provenance::Direct:
      return "direct";
    case Provenance::ProductRule:
      return "product_rule";
    case Provenance::Zero:
      return "zero";
  }
  return "?";
}

bool AmplitudeEstimate::is_zero(std::size_t j) const {
  return std::binary_search(zero_set.begin(), zero_set.end(), j);
}

std::optional<std::size_t> CompressedIndexSet::position(std::size_t j) const {
  auto it = std::lower_bound(kept.begin(), kept.end(), j);
  if (it == kept.end() || *it != j) return std::nullopt;
  return static_cast<std::size_t>(it - kept.begin());
}

CorrelatorSet::CorrelatorSet(std::size_t n_qubits)
    : n_(n_qubits),
      values_(n_qubits * n_qubits, Complex{0.0, 0.0}),
      provenance_(n_qubits * n_qubits, Provenance::Unfilled) {}

std::size_t CorrelatorSet::index(std::size_t j, std::size_t l) const {
  if (j >= n_ || l >= n_ || j == l)
    throw ValidationError(fmt::format("correlator pair ({}, {}) invalid for {} qubits", j, l, n_));
  return std::min(j, l) * n_ + std::max(j, l);
}

Complex CorrelatorSet::get(std::size_t j, std::size_t l) const {
  const Complex v = values_[index(j, l)];
  return j < l ? v : std::conj(v);
}

Provenance CorrelatorSet::provenance(std::size_t j, std::size_t l) const { return provenance_[index(j, l)]; }

void CorrelatorSet::set(std::size_t j, std::size_t l, Complex value, Provenance p) {
  const std::size_t i = index(j, l);
  values_[i] = j < l ? value : std::conj(value);
  provenance_[i] = p;
}

Circuit build_setting(SettingKind kind, const CompressedIndexSet& kept, std::size_t n_qubits) {
  Circuit c(n_qubits);
  switch (kind) {
    case SettingKind::Z:
      break;
    case SettingKind::XX:
      for (auto q : kept.kept) c.hadamard(q);
      break;
    case SettingKind::XY:
      for (std::size_t p = 0; p < kept.size(); ++p) {
        if (p % 2 == 0) {
          c.hadamard(kept.kept[p]);
        } else {
          c.sdg_h(kept.kept[p]);
        }
      }
      break;
  }
  return c;
}

AmplitudeEstimate estimate_amplitudes(const OutcomeFrequencies& z, const ProtocolOptions& opts) {
  const std::size_t n = z.n_qubits;
  AmplitudeEstimate est;
  est.probabilities.assign(n, 0.0);
  est.shots_used = z.shots;
  for (const auto& [idx, w] : z.entries) {
    if (std::popcount(idx) == 1) {
      // Single set bit at position (n - 1 - q) belongs to qubit q.
      const auto q = n - 1 - static_cast<std::size_t>(std::countr_zero(idx));
      est.probabilities[q] += w;
    } else {
      est.leakage += w;
    }
  }
  est.magnitudes.resize(n);
  const double threshold = z.analytic() ? kExactZeroProbability : opts.zero_threshold / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    est.magnitudes[j] = std::sqrt(est.probabilities[j]);
    const bool zero = z.analytic() ? est.probabilities[j] <= threshold
                                   : (est.probabilities[j] == 0.0 || est.probabilities[j] < threshold);
    if (zero) est.zero_set.push_back(j);
  }
  return est;
}

OutcomeFrequencies measure_setting(const StateVector& trial_state, const Circuit& rotation,
                                   const MeasurementMode& mode, std::uint64_t setting_index) {
  const StateVector rotated = rotation.empty() ? trial_state : apply_circuit(trial_state, rotation);
  if (mode.analytic) return OutcomeFrequencies::exact(rotated);
  return OutcomeFrequencies::from_counts(sample(rotated, mode.shots, derive_seed(mode.seed, {setting_index})));
}

AmplitudeEstimate measure_z(const Circuit& trial, const MeasurementMode& mode, const ProtocolOptions& opts) {
  const StateVector state = run_circuit(trial);
  return estimate_amplitudes(measure_setting(state, Circuit(trial.num_qubits()), mode, 0), opts);
}

CompressedIndexSet compress(const AmplitudeEstimate& amps) {
  CompressedIndexSet s;
  for (std::size_t j = 0; j < amps.num_qubits(); ++j) {
    if (!amps.is_zero(j)) s.kept.push_back(j);
  }
  return s;
}

double estimate_pair_parity(const OutcomeFrequencies& outcomes, std::size_t j, std::size_t l) {
  const std::size_t n = outcomes.n_qubits;
  if (j >= n || l >= n || j == l)
    throw ValidationError(fmt::format("parity pair ({}, {}) invalid for {} qubits", j, l, n));
  const BasisIndex mask = qubit_mask(n, j) | qubit_mask(n, l);
  double acc = 0.0;
  for (const auto& [idx, w] : outcomes.entries) acc += (std::popcount(idx & mask) & 1) ? -w : w;
  return acc;
}

double estimate_pair_parity(const ShotCounts& counts, std::size_t j, std::size_t l) {
  return estimate_pair_parity(OutcomeFrequencies::from_counts(counts), j, l);
}

double xy_expectation(const OutcomeFrequencies& xy, const CompressedIndexSet& kept, std::size_t p, std::size_t q,
                      const ProtocolOptions& opts) {
  if (p >= q || q >= kept.size() || (p + q) % 2 == 0)
    throw ValidationError(fmt::format("positions ({}, {}) are not an ordered different-parity pair", p, q));
  const double measured = estimate_pair_parity(xy, kept.kept[p], kept.kept[q]);
  // Even p: the setting measured X_j Y_l. Odd p: it measured Y_j X_l = -X_j Y_l.
  if (p % 2 == 0 || opts.fault_skip_xy_sign_flip) return measured;
  return -measured;
}

namespace {

void mark_zero_pairs(CorrelatorSet& cset, const AmplitudeEstimate& amps) {
  const std::size_t n = amps.num_qubits();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = j + 1; l < n; ++l) {
      if (amps.is_zero(j) || amps.is_zero(l)) cset.set(j, l, 0.0, Provenance::Zero);
    }
  }
}

Complex clip(Complex c, double bound, bool& clipped) {
  const double mag = std::abs(c);
  clipped = mag > bound;
  return clipped ? c * (bound / mag) : c;
}

}  // namespace

CorrelatorSet correlators_direct(const AmplitudeEstimate& amps, const OutcomeFrequencies& xx,
                                 const OutcomeFrequencies& xy, const CompressedIndexSet& kept,
                                 const ProtocolOptions& opts) {
  const std::size_t n = amps.num_qubits();
  CorrelatorSet cset(n);
  mark_zero_pairs(cset, amps);
  if (kept.size() < 2) return cset;
  if (xx.n_qubits != n || xy.n_qubits != n || xx.entries.empty() || xy.entries.empty())
    throw ValidationError("correlators_direct: XX and XY outcomes are required for every kept pair");

  const bool shot_mode = !xx.analytic() || !xy.analytic();
  for (std::size_t p = 0; p < kept.size(); ++p) {
    for (std::size_t q = p + 1; q < kept.size(); q += 2) {  // q - p odd
      const std::size_t j = kept.kept[p];
      const std::size_t l = kept.kept[q];
      Complex c{estimate_pair_parity(xx, j, l), xy_expectation(xy, kept, p, q, opts)};
      if (shot_mode && opts.clip_correlators) {
        bool clipped = false;
        c = clip(c, 2.0 * amps.magnitudes[j] * amps.magnitudes[l], clipped);
        cset.clipped += clipped ? 1 : 0;
      }
      cset.set(j, l, c, Provenance::Direct);
    }
  }
  return cset;
}

Complex product_rule(CorrelatorSet& cset, const AmplitudeEstimate& amps, const CompressedIndexSet& kept,
                     std::size_t j, std::size_t l) {
  const auto pj = kept.position(j);
  const auto pl = kept.position(l);
  if (!pj || !pl || j == l) throw ValidationError(fmt::format("product rule needs two kept indices ({}, {})", j, l));
  if ((*pj + *pl) % 2 != 0)
    throw ValidationError(fmt::format("product rule applies to same-parity pairs only ({}, {})", j, l));

  std::optional<std::size_t> best;
  for (std::size_t r = (*pj + 1) % 2; r < kept.size(); r += 2) {
    const std::size_t k = kept.kept[r];
    if (!best || amps.probabilities[k] > amps.probabilities[*best]) best = k;
  }
  if (!best || !(amps.probabilities[*best] > 0.0))
    throw NumericalError(fmt::format("no opposite-parity intermediate for pair ({}, {})", j, l));
  const std::size_t k = *best;
  const Complex c = cset.get(j, k) * cset.get(k, l) / (2.0 * amps.probabilities[k]);
  cset.set(j, l, c, Provenance::ProductRule);
  return cset.get(j, l);
}

void fill_product_rule(CorrelatorSet& cset, const AmplitudeEstimate& amps, const CompressedIndexSet& kept) {
  for (std::size_t p = 0; p < kept.size(); ++p) {
    for (std::size_t q = p + 2; q < kept.size(); q += 2) {
      if (cset.provenance(kept.kept[p], kept.kept[q]) == Provenance::Unfilled)
        product_rule(cset, amps, kept, kept.kept[p], kept.kept[q]);
    }
  }
}

double cost_function(const ComplexMatrix& h, const AmplitudeEstimate& amps, const CorrelatorSet& cset) {
  const std::size_t n = amps.num_qubits();
  if (static_cast<std::size_t>(h.rows()) != n || static_cast<std::size_t>(h.cols()) != n || cset.num_qubits() != n)
    throw ValidationError("cost_function: Hamiltonian, amplitudes and correlators disagree on N");
  double e = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    e += h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)).real() * amps.probabilities[j];
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = j + 1; l < n; ++l) {
      if (cset.provenance(j, l) == Provenance::Unfilled)
        throw NumericalError(fmt::format("cost_function: correlator C_{},{} was never filled", j, l));
      e += (cset.get(j, l) * h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l))).real();
    }
  }
  return e;
}

std::vector<Complex> reconstruct_state(const AmplitudeEstimate& amps, const CorrelatorSet& cset) {
  const std::size_t n = amps.num_qubits();
  std::optional<std::size_t> ref;
  for (std::size_t j = 0; j < n; ++j) {
    if (amps.is_zero(j)) continue;
    if (!ref || amps.magnitudes[j] > amps.magnitudes[*ref]) ref = j;
  }
  if (!ref) throw NumericalError("reconstruct_state: every amplitude is zero");
  std::vector<Complex> a(n, Complex{0.0, 0.0});
  a[*ref] = amps.magnitudes[*ref];
  for (std::size_t l = 0; l < n; ++l) {
    if (l == *ref || amps.is_zero(l)) continue;
    if (cset.provenance(*ref, l) == Provenance::Unfilled)
      throw NumericalError(fmt::format("reconstruct_state: correlator C_{},{} was never filled", *ref, l));
    a[l] = std::polar(amps.magnitudes[l], std::arg(cset.get(*ref, l)));
  }
  return a;
}

ProtocolEvaluation evaluate_protocol(const StateVector& trial_state, const ComplexMatrix& h,
                                     const MeasurementMode& mode, const ProtocolOptions& opts) {
  const std::size_t n = trial_state.num_qubits();
  if (static_cast<std::size_t>(h.rows()) != n)
    throw ValidationError(fmt::format("Hamiltonian is {}x{}, trial state has {} qubits", h.rows(), h.cols(), n));
  if (!mode.analytic && mode.shots == 0) throw ValidationError("shot mode needs at least one shot");

  ProtocolEvaluation out;
  out.settings.push_back(SettingKind::Z);
  out.amplitudes = estimate_amplitudes(measure_setting(trial_state, Circuit(n), mode, 0), opts);
  out.kept = compress(out.amplitudes);
  if (out.kept.size() >= 2) {
    const auto xx = measure_setting(trial_state, build_setting(SettingKind::XX, out.kept, n), mode, 1);
    const auto xy = measure_setting(trial_state, build_setting(SettingKind::XY, out.kept, n), mode, 2);
    out.settings.push_back(SettingKind::XX);
    out.settings.push_back(SettingKind::XY);
    out.correlators = correlators_direct(out.amplitudes, xx, xy, out.kept, opts);
    fill_product_rule(out.correlators, out.amplitudes, out.kept);
  } else {
    out.correlators = CorrelatorSet(n);
    mark_zero_pairs(out.correlators, out.amplitudes);
  }
  out.energy = cost_function(h, out.amplitudes, out.correlators);
  return out;
}

ProtocolEvaluation evaluate_protocol(const Circuit& trial, const ComplexMatrix& h, const MeasurementMode& mode,
                                     const ProtocolOptions& opts) {
  return evaluate_protocol(run_circuit(trial), h, mode, opts);
}

}  // namespace tbvqd
