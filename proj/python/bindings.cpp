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

// Python bindings: thin wrappers returning plain Python / NumPy values.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tbvqd/bench.hpp"
#include "tbvqd/cli.hpp"
#include "tbvqd/pauli.hpp"
#include "tbvqd/protocol.hpp"
#include "tbvqd/tbmodel.hpp"
#include "tbvqd/validate.hpp"
#include "tbvqd/vqd.hpp"

namespace py = pybind11;
using namespace tbvqd;

namespace {

ComplexMatrix bloch_at(const TightBindingModel& m, const std::vector<double>& k) {
  KVector kv;
  kv.components = Eigen::Map<const RealVector>(k.data(), static_cast<Eigen::Index>(k.size()));
  return bloch_matrix(m, kv).entries;
}

py::dict protocol_eval(const ComplexMatrix& h, const std::vector<double>& angles, std::uint64_t shots,
                       std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(h.rows());
  const MeasurementMode mode = shots == 0 ? MeasurementMode::exact() : MeasurementMode::sampled(shots, seed);
  const ProtocolEvaluation ev = evaluate_protocol(build_ansatz(n, angles), h, mode);
  py::dict out;
  out["energy"] = ev.energy;
  out["probabilities"] = ev.amplitudes.probabilities;
  out["zero_set"] = ev.amplitudes.zero_set;
  out["leakage"] = ev.amplitudes.leakage;
  std::vector<std::string> settings;
  for (auto s : ev.settings) settings.emplace_back(to_string(s));
  out["settings"] = settings;
  py::dict corr;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = j + 1; l < n; ++l) {
      corr[py::make_tuple(j, l)] = py::make_tuple(ev.correlators.get(j, l), std::string(to_string(ev.correlators.provenance(j, l))));
    }
  }
  out["correlators"] = corr;
  return out;
}

py::dict sweep(const TightBindingModel& m, bool analytic, std::uint64_t shots, std::uint64_t seed, int restarts,
               std::size_t max_levels, int points_per_segment, bool warm_start) {
  RunConfig cfg;
  cfg.analytic = analytic;
  cfg.shots = shots;
  cfg.seed = seed;
  cfg.restarts = restarts;
  cfg.warm_start = warm_start;
  DeflationConfig d;
  d.max_levels = max_levels;
  const auto path = model_kpath(m, points_per_segment > 0 ? std::optional<int>(points_per_segment) : std::nullopt);
  BandStructureResult r;
  {
    py::gil_scoped_release release;
    r = band_sweep(m, path, cfg, d);
  }
  std::vector<double> dist;
  std::vector<std::vector<double>> vqd(path.size());
  for (const auto& k : path) dist.push_back(k.path_distance);
  for (const auto& p : r.points) vqd[p.k_index].push_back(p.energy_vqd);
  py::dict out;
  out["path_distance"] = dist;
  out["energy_vqd"] = vqd;
  out["energy_exact"] = r.exact;
  out["failures"] = r.failures;
  out["max_abs_error"] = r.max_abs_error();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tight-binding band structures via a constant three-setting measurement protocol";
  m.attr("__version__") = version_string();

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<TightBindingModel>(m, "Model")
      .def_property_readonly("name", &TightBindingModel::name)
      .def_property_readonly("num_orbitals", &TightBindingModel::num_orbitals)
      .def_property_readonly("dimension", &TightBindingModel::dimension)
      .def_property_readonly("num_hoppings", [](const TightBindingModel& t) { return t.hoppings().size(); })
      .def("bloch_matrix", &bloch_at, py::arg("k"))
      .def(
          "kpath",
          [](const TightBindingModel& t, int pps) {
            std::vector<py::tuple> out;
            for (const auto& k : model_kpath(t, pps > 0 ? std::optional<int>(pps) : std::nullopt)) {
              out.push_back(py::make_tuple(k.path_distance,
                                           std::vector<double>(k.components.data(), k.components.data() + k.components.size()),
                                           k.label));
            }
            return out;
          },
          py::arg("points_per_segment") = 0);

  m.def("parse_model", [](const std::string& text) { return parse_model(text); }, py::arg("text"));
  m.def("load_model", [](const std::string& path) { return load_model(path); }, py::arg("path"));
  m.def("exact_bands", [](const ComplexMatrix& h) { return exact_bands(h); }, py::arg("h"));
  m.def("qubit_hamiltonian", [](const ComplexMatrix& h) { return dump(qubit_hamiltonian(h)); }, py::arg("h"),
        "text dump: one 'coeff  LETTERS' line per term");
  m.def("qwc_group_count", [](const ComplexMatrix& h) { return qwc_groups_conventional(qubit_hamiltonian(h)).groups.size(); },
        py::arg("h"));
  m.def(
      "ansatz_amplitudes",
      [](std::size_t n, const std::vector<double>& angles) {
        return run_circuit(build_ansatz(n, angles)).single_excitation_amplitudes();
      },
      py::arg("n_qubits"), py::arg("angles"));
  m.def("ansatz_angles_for", [](const std::vector<Complex>& a) { return ansatz_angles_for(a).angles; }, py::arg("a"));
  m.def("evaluate_protocol", &protocol_eval, py::arg("h"), py::arg("angles"), py::arg("shots") = 0,
        py::arg("seed") = 0, "shots = 0 selects analytic mode");
  m.def("band_sweep", &sweep, py::arg("model"), py::arg("analytic") = true, py::arg("shots") = 20000,
        py::arg("seed") = 20260101, py::arg("restarts") = 2, py::arg("max_levels") = 0,
        py::arg("points_per_segment") = 0, py::arg("warm_start") = true);
  m.def(
      "execution_report",
      [](const std::vector<std::size_t>& ns, const std::vector<std::uint64_t>& shots) {
        std::vector<py::dict> out;
        for (const auto& r : execution_report(ns, shots)) {
          py::dict d;
          d["n_qubits"] = r.n_qubits;
          d["shots"] = r.shots;
          d["constant"] = r.total_constant;
          d["conventional"] = r.total_conventional;
          out.push_back(d);
        }
        return out;
      },
      py::arg("n_qubits"), py::arg("shots"));
  m.def(
      "correlator_trials",
      [](std::size_t n_min, std::size_t n_max, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
         std::uint64_t shots, std::size_t trials, std::uint64_t seed, bool analytic) {
        TrialConfig c;
        c.n_min = n_min;
        c.n_max = n_max;
        c.pairs = pairs;
        c.shots = shots;
        c.trials = trials;
        c.base_seed = seed;
        c.analytic = analytic;
        TrialResult r;
        {
          py::gil_scoped_release release;
          r = correlator_trials(c);
        }
        std::vector<py::dict> out;
        for (const auto& s : r.stats) {
          py::dict d;
          d["n_qubits"] = s.n_qubits;
          d["pair"] = py::make_tuple(s.j, s.l);
          d["mean"] = s.mean;
          d["std_re"] = s.std_re;
          d["std_im"] = s.std_im;
          d["exact"] = s.exact;
          out.push_back(d);
        }
        return out;
      },
      py::arg("n_min"), py::arg("n_max"), py::arg("pairs"), py::arg("shots") = 10000, py::arg("trials") = 50,
      py::arg("seed") = 20260101, py::arg("analytic") = false);
  m.def(
      "validate",
      [](std::size_t max_qubits, std::size_t samples) {
        ValidateOptions o;
        o.max_qubits = max_qubits;
        o.samples = samples;
        const auto rep = run_validation(o);
        return py::make_tuple(rep.all_passed(), rep.table());
      },
      py::arg("max_qubits") = 6, py::arg("samples") = 10);
  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::vector<std::string> full{"tbvqd"};
    full.insert(full.end(), args.begin(), args.end());
    return run_cli(full);
  }, py::arg("args"));
}
