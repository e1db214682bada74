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

#include "tbvqd/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "tbvqd/bench.hpp"
#include "tbvqd/pauli.hpp"
#include "tbvqd/report.hpp"
#include "tbvqd/tbmodel.hpp"
#include "tbvqd/validate.hpp"
#include "tbvqd/vqd.hpp"

#ifndef TBVQD_VERSION
#define TBVQD_VERSION "0.0.0"
#endif

namespace tbvqd {

const char* version_string() { return TBVQD_VERSION; }

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Effective settings after defaults, config file and flags are merged.
struct Settings {
  // global
  std::uint64_t seed = 20260101;
  std::optional<std::uint64_t> shots;  // unset: per-command default
  bool analytic = false;
  std::size_t jobs = 0;
  std::string out_dir = "tbvqd-out";
  // bands
  std::string model;
  int points_per_segment = 0;  // 0 = model file value
  std::size_t max_levels = 0;
  int restarts = 2;
  int max_iterations = 300;
  bool warm_start = true;
  std::optional<double> beta;
  double check_tolerance = 1e-5;
  // bench
  std::string qubits = "4..14";
  std::string pairs = "0,4;1,3";
  std::size_t trials = 50;
  bool clip = false;
  std::vector<std::uint64_t> exec_shots{10000, 100000, 1000000};
  // validate
  std::size_t max_qubits = 8;
  std::size_t samples = 25;
  std::string inject_fault;
  // dump-hamiltonian
  std::vector<double> k;
  bool k_fractional = false;
};

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---- config file ----------------------------------------------------------

std::size_t line_of(const toml::node& n) { return n.source().begin.line; }

template <typename T>
T toml_get(const toml::node& n, std::string_view key) {
  if constexpr (std::is_same_v<T, bool>) {
    if (auto v = n.value<bool>()) return *v;
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (auto v = n.value<std::string>()) return *v;
  } else if constexpr (std::is_floating_point_v<T>) {
    if (auto v = n.value<double>()) return *v;
  } else {
    if (auto v = n.value<std::int64_t>(); v && *v >= 0) return static_cast<T>(*v);
  }
  throw ParseError(fmt::format("config key '{}' has the wrong type", key), line_of(n));
}

void load_config(const fs::path& path, Settings& s) {
  toml::table root;
  try {
    root = toml::parse_file(path.string());
  } catch (const toml::parse_error& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.description()), e.source().begin.line);
  }
  auto section = [&](std::string_view name) -> const toml::table* {
    const toml::node* n = root.get(name);
    if (!n) return nullptr;
    if (!n->is_table()) throw ParseError(fmt::format("config '{}' must be a table", name), line_of(*n));
    return n->as_table();
  };
  for (const auto& [key, node] : root) {
    const auto k = key.str();
    if (k != "run" && k != "bands" && k != "bench" && k != "validate")
      throw ParseError(fmt::format("unknown config section '{}'", k), line_of(node));
  }
  if (const auto* t = section("run")) {
    for (const auto& [key, node] : *t) {
      const auto k = key.str();
      if (k == "seed") s.seed = toml_get<std::uint64_t>(node, k);
      else if (k == "shots") s.shots = toml_get<std::uint64_t>(node, k);
      else if (k == "analytic") s.analytic = toml_get<bool>(node, k);
      else if (k == "jobs") s.jobs = toml_get<std::size_t>(node, k);
      else if (k == "out_dir") s.out_dir = toml_get<std::string>(node, k);
      else throw ParseError(fmt::format("unknown key '{}' in [run]", k), line_of(node));
    }
  }
  if (const auto* t = section("bands")) {
    for (const auto& [key, node] : *t) {
      const auto k = key.str();
      if (k == "points_per_segment") s.points_per_segment = static_cast<int>(toml_get<std::size_t>(node, k));
      else if (k == "max_levels") s.max_levels = toml_get<std::size_t>(node, k);
      else if (k == "restarts") s.restarts = static_cast<int>(toml_get<std::size_t>(node, k));
      else if (k == "max_iterations") s.max_iterations = static_cast<int>(toml_get<std::size_t>(node, k));
      else if (k == "warm_start") s.warm_start = toml_get<bool>(node, k);
      else if (k == "beta") s.beta = toml_get<double>(node, k);
      else if (k == "check_tolerance") s.check_tolerance = toml_get<double>(node, k);
      else throw ParseError(fmt::format("unknown key '{}' in [bands]", k), line_of(node));
    }
  }
  if (const auto* t = section("bench")) {
    for (const auto& [key, node] : *t) {
      const auto k = key.str();
      if (k == "qubits") s.qubits = toml_get<std::string>(node, k);
      else if (k == "pairs") s.pairs = toml_get<std::string>(node, k);
      else if (k == "trials") s.trials = toml_get<std::size_t>(node, k);
      else if (k == "clip") s.clip = toml_get<bool>(node, k);
      else if (k == "exec_shots") {
        const auto* arr = node.as_array();
        if (!arr) throw ParseError("bench.exec_shots must be an array", line_of(node));
        s.exec_shots.clear();
        for (const auto& v : *arr) s.exec_shots.push_back(toml_get<std::uint64_t>(v, k));
      } else {
        throw ParseError(fmt::format("unknown key '{}' in [bench]", k), line_of(node));
      }
    }
  }
  if (const auto* t = section("validate")) {
    for (const auto& [key, node] : *t) {
      const auto k = key.str();
      if (k == "max_qubits") s.max_qubits = toml_get<std::size_t>(node, k);
      else if (k == "samples") s.samples = toml_get<std::size_t>(node, k);
      else throw ParseError(fmt::format("unknown key '{}' in [validate]", k), line_of(node));
    }
  }
}

std::uint64_t shots_for(const Settings& s, const std::string& command) {
  return s.shots.value_or(command == "bench" ? 10000 : 20000);
}

json settings_json(const Settings& s, const std::string& command) {
  json j;
  j["seed"] = s.seed;
  j["analytic"] = s.analytic;
  j["shots"] = s.analytic ? 0 : shots_for(s, command);
  j["jobs"] = s.jobs;
  j["out_dir"] = s.out_dir;
  if (command == "bands") {
    j["model"] = s.model;
    j["points_per_segment"] = s.points_per_segment;
    j["max_levels"] = s.max_levels;
    j["restarts"] = s.restarts;
    j["max_iterations"] = s.max_iterations;
    j["warm_start"] = s.warm_start;
    j["beta"] = s.beta ? json(*s.beta) : json("per-k default");
    j["check_tolerance"] = s.check_tolerance;
  } else if (command == "bench") {
    j["qubits"] = s.qubits;
    j["pairs"] = s.pairs;
    j["trials"] = s.trials;
    j["clip"] = s.clip;
    j["exec_shots"] = s.exec_shots;
  }
  return j;
}

// ---- argument helpers -----------------------------------------------------

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const auto v = static_cast<std::size_t>(std::stoul(text));
      return {v, v};
    }
    return {static_cast<std::size_t>(std::stoul(text.substr(0, dots))),
            static_cast<std::size_t>(std::stoul(text.substr(dots + 2)))};
  } catch (const std::exception&) {
    throw ValidationError(fmt::format("qubit range '{}' is not of the form a..b", text));
  }
}

std::vector<std::pair<std::size_t, std::size_t>> parse_pairs(const std::string& text) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto comma = item.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("no comma");
      out.emplace_back(std::stoul(item.substr(0, comma)), std::stoul(item.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ValidationError(fmt::format("pair '{}' is not of the form j,l", item));
    }
  }
  if (out.empty()) throw ValidationError("no correlator pairs given");
  return out;
}

void add_output(json& outputs, const fs::path& p, const std::string& kind, std::optional<std::uint64_t> seed) {
  json o;
  o["path"] = p.filename().string();
  o["kind"] = kind;
  if (seed) o["seed"] = *seed;
  outputs.push_back(o);
}

// ---- commands -------------------------------------------------------------

int cmd_bands(const Settings& s, json& manifest) {
  const TightBindingModel model = load_model(s.model);
  const auto path = model_kpath(model, s.points_per_segment > 0 ? std::optional<int>(s.points_per_segment) : std::nullopt);

  RunConfig cfg;
  cfg.analytic = s.analytic;
  cfg.shots = shots_for(s, "bands");
  cfg.seed = s.seed;
  cfg.jobs = s.jobs;
  cfg.restarts = s.restarts;
  cfg.max_iterations = s.max_iterations;
  cfg.warm_start = s.warm_start;
  DeflationConfig dcfg;
  dcfg.beta = s.beta;
  dcfg.max_levels = s.max_levels;

  const BandStructureResult res = band_sweep(model, path, cfg, dcfg);

  std::size_t mismatches = 0;
  double worst = 0.0;
  std::vector<double> errors;
  for (const auto& p : res.points) {
    if (p.failed) continue;
    const double err = std::abs(p.energy_vqd - p.energy_exact);
    worst = std::max(worst, err);
    errors.push_back(err);
    if (s.analytic && err > s.check_tolerance) ++mismatches;
  }
  std::size_t within = 0;
  for (double e : errors) within += e < 0.05 ? 1 : 0;

  const fs::path out(s.out_dir);
  const fs::path csv = out / "bands.csv", svg = out / "bands.svg";
  write_text_file(csv, bands_table(res).str());
  const std::string title = model.name().empty() ? fs::path(s.model).stem().string() : model.name();
  write_text_file(svg, bands_svg(res, title));

  json outputs = json::array();
  add_output(outputs, csv, "band_csv", s.seed);
  add_output(outputs, svg, "band_svg", s.seed);
  manifest["outputs"] = outputs;
  json tel = json::array();
  for (const auto& p : res.points) {
    json t;
    t["k_index"] = p.k_index;
    t["band"] = p.band;
    t["level"] = p.level;
    t["iterations"] = p.iterations;
    t["cost_evals"] = p.cost_evals;
    t["seed"] = p.seed;
    t["theta"] = p.theta;
    t["termination"] = p.termination;
    t["failed"] = p.failed;
    if (!p.error.empty()) t["error"] = p.error;
    tel.push_back(t);
  }
  manifest["telemetry"] = tel;
  json summary;
  summary["k_points"] = res.kpoints.size();
  summary["levels"] = res.num_levels;
  summary["failures"] = res.failures;
  summary["oracle_mismatches"] = mismatches;
  summary["max_abs_error"] = worst;
  summary["fraction_within_0.05"] = errors.empty() ? 0.0 : static_cast<double>(within) / errors.size();
  summary["clipped_correlators"] = res.clipped_correlators;
  summary["beta_default"] = !s.beta.has_value();
  manifest["summary"] = summary;

  fmt::print("{}: {} k-points x {} bands, {} mode\n", title, res.kpoints.size(), res.num_levels,
             s.analytic ? "analytic" : fmt::format("shot ({} shots/setting)", cfg.shots));
  fmt::print("max |E_vqd - E_exact| = {:.3e} eV, failed points = {}\n", worst, res.failures);
  if (s.analytic) fmt::print("points above {:.1e} eV: {}\n", s.check_tolerance, mismatches);
  fmt::print("wrote {}\n", csv.string());
  return (res.failures > 0 || mismatches > 0) ? kExitFailure : kExitOk;
}

int cmd_bench(const Settings& s, json& manifest) {
  const auto [lo, hi] = parse_range(s.qubits);
  TrialConfig tc;
  tc.n_min = lo;
  tc.n_max = hi;
  tc.pairs = parse_pairs(s.pairs);
  tc.shots = shots_for(s, "bench");
  tc.protocol.clip_correlators = s.clip;
  tc.trials = s.trials;
  tc.base_seed = s.seed;
  tc.analytic = s.analytic;
  tc.jobs = s.jobs;
  const TrialResult tr = correlator_trials(tc);

  std::vector<std::size_t> ns;
  for (std::size_t n = lo; n <= hi; ++n) ns.push_back(n);
  const auto exec = execution_report(ns, s.exec_shots);

  const fs::path out(s.out_dir);
  const fs::path stats = out / "correlator_stats.csv", execs = out / "executions.csv",
                 dump = out / "correlator_dump.csv", exec_svg = out / "executions.svg";
  write_text_file(stats, correlator_stats_table(tr).str());
  write_text_file(execs, executions_table(exec).str());
  write_text_file(dump, correlator_dump_table(tr).str());
  write_text_file(exec_svg, executions_svg(exec));
  json outputs = json::array();
  add_output(outputs, stats, "correlator_stats_csv", s.seed);
  add_output(outputs, execs, "executions_csv", std::nullopt);
  add_output(outputs, dump, "correlator_dump_csv", s.seed);
  add_output(outputs, exec_svg, "executions_svg", std::nullopt);
  for (const auto& [j, l] : tc.pairs) {
    const fs::path p = out / fmt::format("correlator_C{}{}.svg", j, l);
    write_text_file(p, correlator_stats_svg(tr, j, l));
    add_output(outputs, p, "correlator_svg", s.seed);
  }
  manifest["outputs"] = outputs;
  manifest["notes"] = tr.notes;
  manifest["theta_policy"] =
      "per-N seeded amplitudes: weights U[0.8,1.2] on orbitals 0,1,3,4, U[0.03,0.06] elsewhere; "
      "phases uniform except l = j + pi/4 + q pi/2 for pairs (0,4) and (1,3)";

  for (const auto& note : tr.notes) fmt::print(stderr, "note: {}\n", note);
  fmt::print("{:>3} {:>5} {:>10} {:>10} {:>10} {:>10}\n", "N", "pair", "std_re", "std_im", "err_re", "err_im");
  for (const auto& st : tr.stats) {
    fmt::print("{:>3} {:>2},{:<2} {:>10.4f} {:>10.4f} {:>10.4f} {:>10.4f}\n", st.n_qubits, st.j, st.l, st.std_re,
               st.std_im, std::abs(st.mean.real() - st.exact.real()), std::abs(st.mean.imag() - st.exact.imag()));
  }
  fmt::print("wrote {}\n", stats.string());
  return kExitOk;
}

int cmd_validate(const Settings& s) {
  ValidateOptions vo;
  vo.max_qubits = s.max_qubits;
  vo.samples = s.samples;
  vo.seed = s.seed;
  if (s.inject_fault == "xy-sign") vo.protocol.fault_skip_xy_sign_flip = true;
  else if (!s.inject_fault.empty())
    throw ValidationError(fmt::format("unknown fault '{}' (known: xy-sign)", s.inject_fault));
  const ValidationReport rep = run_validation(vo);
  fmt::print("{}", rep.table());
  return rep.all_passed() ? kExitOk : kExitFailure;
}

int cmd_dump(const Settings& s) {
  const TightBindingModel model = load_model(s.model);
  KVector k;
  if (s.k.empty()) {
    k.components = RealVector::Zero(static_cast<Eigen::Index>(model.dimension()));
  } else if (s.k_fractional) {
    k.components = model.fractional_to_cartesian(s.k);
  } else {
    k.components = Eigen::Map<const RealVector>(s.k.data(), static_cast<Eigen::Index>(s.k.size()));
  }
  const BlochMatrix b = bloch_matrix(model, k);
  const QubitHamiltonian q = qubit_hamiltonian(b);
  std::string kstr;
  for (Eigen::Index i = 0; i < k.components.size(); ++i) kstr += fmt::format("{}{:.6g}", i ? ", " : "", k.components(i));
  fmt::print("# k = ({})\n# Bloch matrix\n", kstr);
  for (Eigen::Index r = 0; r < b.entries.rows(); ++r) {
    std::string row;
    for (Eigen::Index c = 0; c < b.entries.cols(); ++c)
      row += fmt::format("  ({:+.6f} {:+.6f}i)", b.entries(r, c).real(), b.entries(r, c).imag());
    fmt::print("#{}\n", row);
  }
  fmt::print("{}", dump(q));
  fmt::print("# conventional QWC groups: {}; constant protocol settings: 3\n", qwc_groups_conventional(q).groups.size());
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  std::vector<char*> argv;
  std::vector<std::string> copy = args;
  for (auto& a : copy) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Tight-binding band structures with a constant three-setting measurement protocol"};
  app.set_version_flag("--version", std::string(version_string()));
  app.require_subcommand(1, 1);
  app.fallthrough();

  Settings cli;
  std::string config_path;
  auto* o_seed = app.add_option("--seed", cli.seed, "base RNG seed");
  auto* o_shots = app.add_option("--shots", cli.shots, "shots per measurement setting")->check(CLI::PositiveNumber);
  auto* o_analytic = app.add_flag("--analytic", cli.analytic, "use exact outcome probabilities");
  auto* o_jobs = app.add_option("--jobs", cli.jobs, "worker threads (0 = all cores)");
  auto* o_out = app.add_option("--out-dir", cli.out_dir, "output directory");
  app.add_option("--config", config_path, "TOML run configuration")->check(CLI::ExistingFile);

  auto* bands = app.add_subcommand("bands", "VQD band structure along the model's k-path");
  bands->add_option("model", cli.model, "model file")->required();
  auto* o_pps = bands->add_option("--points-per-segment", cli.points_per_segment)->check(CLI::Range(2, 100000));
  auto* o_levels = bands->add_option("--max-levels", cli.max_levels, "bands to compute (0 = all)");
  auto* o_restarts = bands->add_option("--restarts", cli.restarts, "extra random starts per point")->check(CLI::NonNegativeNumber);
  auto* o_iters = bands->add_option("--max-iterations", cli.max_iterations)->check(CLI::PositiveNumber);
  bool cold = false;
  auto* o_cold = bands->add_flag("--cold", cold, "disable warm starts (parallel over k)");
  double beta = 0.0;
  auto* o_beta = bands->add_option("--beta", beta, "deflation penalty in eV")->check(CLI::PositiveNumber);
  auto* o_tol = bands->add_option("--check-tolerance", cli.check_tolerance, "analytic oracle tolerance in eV");

  auto* bench = app.add_subcommand("bench", "correlator statistics and execution counts");
  auto* o_qubits = bench->add_option("--qubits", cli.qubits, "qubit range a..b");
  auto* o_pairs = bench->add_option("--pairs", cli.pairs, "same-parity pairs, e.g. \"0,4;1,3\"");
  auto* o_trials = bench->add_option("--trials", cli.trials, "trials per cell (M)");
  auto* o_exec = bench->add_option("--exec-shots", cli.exec_shots, "shot counts for the execution report");
  auto* o_clip = bench->add_flag("--clip", cli.clip, "clip |C_jl| to 2|a_j||a_l| as the VQD cost does");

  auto* validate = app.add_subcommand("validate", "analytic invariant batteries");
  auto* o_maxq = validate->add_option("--max-qubits", cli.max_qubits);
  auto* o_samples = validate->add_option("--samples", cli.samples)->check(CLI::PositiveNumber);
  validate->add_option("--inject-fault", cli.inject_fault, "test fixture: xy-sign");

  auto* dumpc = app.add_subcommand("dump-hamiltonian", "print the Bloch matrix and qubit Hamiltonian at one k");
  dumpc->add_option("model", cli.model, "model file")->required();
  dumpc->add_option("--k", cli.k, "k-point components")->delimiter(',');
  dumpc->add_flag("--fractional", cli.k_fractional, "--k is in reciprocal-lattice units");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  json manifest;
  manifest["command"] = [&] {
    std::string c;
    for (int i = 0; i < argc; ++i) c += (i ? " " : "") + std::string(argv[i]);
    return c;
  }();
  manifest["version"] = version_string();
  manifest["started_at"] = utc_now();

  try {
    Settings s;
    if (!config_path.empty()) load_config(config_path, s);
    auto take = [](CLI::Option* o, auto& dst, const auto& src) {
      if (o->count() > 0) dst = src;
    };
    take(o_seed, s.seed, cli.seed);
    take(o_shots, s.shots, cli.shots);
    take(o_analytic, s.analytic, cli.analytic);
    take(o_jobs, s.jobs, cli.jobs);
    take(o_out, s.out_dir, cli.out_dir);
    take(o_pps, s.points_per_segment, cli.points_per_segment);
    take(o_levels, s.max_levels, cli.max_levels);
    take(o_restarts, s.restarts, cli.restarts);
    take(o_iters, s.max_iterations, cli.max_iterations);
    take(o_tol, s.check_tolerance, cli.check_tolerance);
    take(o_qubits, s.qubits, cli.qubits);
    take(o_pairs, s.pairs, cli.pairs);
    take(o_trials, s.trials, cli.trials);
    take(o_exec, s.exec_shots, cli.exec_shots);
    take(o_clip, s.clip, cli.clip);
    take(o_maxq, s.max_qubits, cli.max_qubits);
    take(o_samples, s.samples, cli.samples);
    if (o_cold->count() > 0) s.warm_start = !cold;
    if (o_beta->count() > 0) s.beta = beta;
    s.model = cli.model;
    s.inject_fault = cli.inject_fault;
    s.k = cli.k;
    s.k_fractional = cli.k_fractional;
    if (s.shots && *s.shots < 1) throw ValidationError("shots must be at least 1");

    manifest["config"] = settings_json(s, command);
    if (!config_path.empty()) manifest["config_file"] = config_path;
    manifest["seeds"] = {{"base", s.seed}, {"derivation", "splitmix64(base, tags); tags listed per output"}};

    int rc = kExitOk;
    if (command == "bands") rc = cmd_bands(s, manifest);
    else if (command == "bench") rc = cmd_bench(s, manifest);
    else if (command == "validate") return cmd_validate(s);
    else return cmd_dump(s);

    manifest["finished_at"] = utc_now();
    manifest["exit_code"] = rc;
    write_text_file(fs::path(s.out_dir) / "manifest.json", manifest.dump(2) + "\n");
    return rc;
  } catch (const ParseError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const ValidationError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitFailure;
  }
}

}  // namespace tbvqd
