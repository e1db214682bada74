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

// TOML front end for TightBindingModel. The schema is closed: every table
// lists the keys it accepts and anything else is an error.

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <fmt/format.h>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "tbvqd/tbmodel.hpp"

namespace tbvqd {

namespace {

std::size_t line_of(const toml::node& node) { return node.source().begin.line; }

void reject_unknown_keys(const toml::table& table, std::string_view where,
                         std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, node] : table) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key.str() == a;
    if (!ok) throw ParseError(fmt::format("unknown key '{}' in {}", key.str(), where), line_of(node));
  }
}

const toml::node& require(const toml::table& table, std::string_view key, std::string_view where) {
  const toml::node* node = table.get(key);
  if (!node) throw ParseError(fmt::format("missing key '{}' in {}", key, where), line_of(table));
  return *node;
}

double as_real(const toml::node& node, std::string_view what) {
  if (auto v = node.value<double>()) return *v;  // also accepts integers
  throw ParseError(fmt::format("{} must be a number", what), line_of(node));
}

std::vector<double> as_real_array(const toml::node& node, std::string_view what) {
  const auto* arr = node.as_array();
  if (!arr) throw ParseError(fmt::format("{} must be an array of numbers", what), line_of(node));
  std::vector<double> out;
  for (const auto& el : *arr) out.push_back(as_real(el, what));
  return out;
}

std::vector<int> as_int_array(const toml::node& node, std::string_view what) {
  const auto* arr = node.as_array();
  if (!arr) throw ParseError(fmt::format("{} must be an array of integers", what), line_of(node));
  std::vector<int> out;
  for (const auto& el : *arr) {
    auto v = el.value_exact<int64_t>();
    if (!v) throw ParseError(fmt::format("{} must contain integers", what), line_of(el));
    out.push_back(static_cast<int>(*v));
  }
  return out;
}

// A real number or a [re, im] pair.
Complex as_complex(const toml::node& node, std::string_view what) {
  if (node.is_number()) return {as_real(node, what), 0.0};
  const auto* arr = node.as_array();
  if (!arr || arr->size() != 2)
    throw ParseError(fmt::format("{} must be a number or a [re, im] pair", what), line_of(node));
  return {as_real(*arr->get(0), what), as_real(*arr->get(1), what)};
}

std::size_t orbital_ref(const toml::node& node, const std::vector<Orbital>& orbitals, std::string_view what) {
  if (auto idx = node.value_exact<int64_t>()) {
    if (*idx < 0 || static_cast<std::size_t>(*idx) >= orbitals.size())
      throw ValidationError(fmt::format("line {}: {} index {} out of range (N = {})", line_of(node), what, *idx,
                                        orbitals.size()));
    return static_cast<std::size_t>(*idx);
  }
  if (auto label = node.value_exact<std::string>()) {
    for (std::size_t i = 0; i < orbitals.size(); ++i) {
      if (orbitals[i].label == *label) return i;
    }
    throw ValidationError(fmt::format("line {}: {} refers to unknown orbital '{}'", line_of(node), what, *label));
  }
  throw ParseError(fmt::format("{} must be an orbital label or index", what), line_of(node));
}

const toml::array& require_array_of_tables(const toml::table& root, std::string_view key) {
  const auto& node = require(root, key, "document");
  const auto* arr = node.as_array();
  if (!arr || !arr->is_array_of_tables())
    throw ParseError(fmt::format("'{}' must be an array of tables ([[{}]])", key, key), line_of(node));
  return *arr;
}

}  // namespace

TightBindingModel parse_model(std::string_view text, std::string_view source_name) {
  toml::table root;
  try {
    root = toml::parse(text, source_name);
  } catch (const toml::parse_error& e) {
    throw ParseError(std::string(e.description()), e.source().begin.line);
  }

  reject_unknown_keys(root, "document", {"name", "lattice", "orbitals", "hoppings", "kpath"});

  std::string name;
  if (const auto* n = root.get("name")) {
    auto s = n->value_exact<std::string>();
    if (!s) throw ParseError("'name' must be a string", line_of(*n));
    name = *s;
  }

  const auto* lattice = root.get_as<toml::table>("lattice");
  if (!lattice) throw ParseError("missing [lattice] section");
  reject_unknown_keys(*lattice, "[lattice]", {"vectors"});
  const auto* vectors = require(*lattice, "vectors", "[lattice]").as_array();
  if (!vectors || vectors->empty()) throw ParseError("lattice.vectors must be a non-empty array", line_of(*lattice));
  std::vector<RealVector> lattice_vectors;
  for (const auto& v : *vectors) {
    const auto comps = as_real_array(v, "lattice vector");
    lattice_vectors.emplace_back(Eigen::Map<const RealVector>(comps.data(), static_cast<Eigen::Index>(comps.size())));
  }

  std::vector<Orbital> orbitals;
  for (const auto& node : require_array_of_tables(root, "orbitals")) {
    const auto& t = *node.as_table();
    reject_unknown_keys(t, "[[orbitals]]", {"label", "onsite"});
    auto label = require(t, "label", "[[orbitals]]").value_exact<std::string>();
    if (!label) throw ParseError("orbital label must be a string", line_of(t));
    orbitals.push_back(Orbital{*label, as_real(require(t, "onsite", "[[orbitals]]"), "orbital onsite energy")});
  }

  std::vector<HoppingTerm> hoppings;
  for (const auto& node : require_array_of_tables(root, "hoppings")) {
    const auto& t = *node.as_table();
    reject_unknown_keys(t, "[[hoppings]]", {"from", "to", "R", "t"});
    HoppingTerm h;
    h.from = orbital_ref(require(t, "from", "[[hoppings]]"), orbitals, "hopping 'from'");
    h.to = orbital_ref(require(t, "to", "[[hoppings]]"), orbitals, "hopping 'to'");
    h.displacement = as_int_array(require(t, "R", "[[hoppings]]"), "hopping R");
    h.amplitude = as_complex(require(t, "t", "[[hoppings]]"), "hopping amplitude t");
    hoppings.push_back(std::move(h));
  }

  TightBindingModel model(std::move(lattice_vectors), std::move(orbitals), std::move(hoppings), std::move(name));

  if (const auto* kp_node = root.get("kpath")) {
    const auto* kp = kp_node->as_table();
    if (!kp) throw ParseError("'kpath' must be a table", line_of(*kp_node));
    reject_unknown_keys(*kp, "[kpath]", {"points_per_segment", "units", "points"});
    KPathSpec spec;
    if (const auto* pps = kp->get("points_per_segment")) {
      auto v = pps->value_exact<int64_t>();
      if (!v) throw ParseError("kpath.points_per_segment must be an integer", line_of(*pps));
      spec.points_per_segment = static_cast<int>(*v);
    }
    std::string units = "fractional";
    if (const auto* u = kp->get("units")) {
      auto v = u->value_exact<std::string>();
      if (!v || (*v != "fractional" && *v != "cartesian"))
        throw ParseError("kpath.units must be \"fractional\" or \"cartesian\"", line_of(*u));
      units = *v;
    }
    const auto* pts = require(*kp, "points", "[kpath]").as_array();
    if (!pts) throw ParseError("kpath.points must be an array", line_of(*kp));
    for (const auto& p : *pts) {
      const auto* pt = p.as_table();
      if (!pt) throw ParseError("kpath points must be inline tables {label = ..., k = [...]}", line_of(p));
      reject_unknown_keys(*pt, "kpath point", {"label", "k"});
      auto label = require(*pt, "label", "kpath point").value_exact<std::string>();
      if (!label) throw ParseError("kpath point label must be a string", line_of(*pt));
      auto coords = as_real_array(require(*pt, "k", "kpath point"), "kpath point k");
      if (units == "fractional") {
        const RealVector cart = model.fractional_to_cartesian(coords);
        coords.assign(cart.data(), cart.data() + cart.size());
      } else if (coords.size() != model.dimension()) {
        throw ValidationError(fmt::format("line {}: kpath point '{}' has {} components, model dimension is {}",
                                          line_of(*pt), *label, coords.size(), model.dimension()));
      }
      spec.points.push_back(LabeledPoint{*label, std::move(coords)});
    }
    if (spec.points.size() < 2) throw ValidationError("kpath needs at least 2 points");
    if (spec.points_per_segment < 2) throw ValidationError("kpath.points_per_segment must be at least 2");
    model.set_kpath_spec(std::move(spec));
  }
  return model;
}

TightBindingModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open model file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str(), path.string());
}

}  // namespace tbvqd
