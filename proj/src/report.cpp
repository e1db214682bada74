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

#include "tbvqd/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

namespace tbvqd {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0
  return fmt::format("{:.12g}", v);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw ValidationError(fmt::format("CSV row has {} cells, header has {}", cells.size(), header_.size()));
  rows_.push_back(std::move(cells));
  return *this;
}

std::string CsvTable::str() const {
  auto join = [](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) line += ',';
      line += cells[i];
    }
    line += '\n';
    return line;
  };
  std::string out = join(header_);
  for (const auto& r : rows_) out += join(r);
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(fmt::format("cannot open {} for writing", path.string()));
  f << content;
  if (!f) throw Error(fmt::format("failed writing {}", path.string()));
}

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<double> nice_ticks(double lo, double hi, int target) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) ticks.push_back(t);
  return ticks;
}

}  // namespace

std::string svg_chart(const std::vector<ChartSeries>& series, const ChartOptions& opts) {
  const double left = 70, right = 150, top = 40, bottom = 55;
  const double pw = opts.width - left - right, ph = opts.height - top - bottom;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  auto ty = [&](double y) { return opts.log_y ? std::log10(y) : y; };
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (opts.log_y && s.y[i] <= 0)) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, ty(s.y[i]));
      ymax = std::max(ymax, ty(s.y[i]));
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + (1.0 - (ty(y) - ymin) / (ymax - ymin)) * ph; };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      opts.width, opts.height);
  out += fmt::format("<text x=\"{:.1f}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                     left + pw / 2, escape_xml(opts.title));
  out += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
                     "stroke=\"black\"/>\n",
                     left, top, pw, ph);

  for (double t : nice_ticks(xmin, xmax, 6)) {
    out += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>"
                       "<text x=\"{0:.1f}\" y=\"{3:.1f}\" text-anchor=\"middle\">{4}</text>\n",
                       px(t), top + ph, top + ph + 5, top + ph + 19, format_number(t));
  }
  for (double t : nice_ticks(ymin, ymax, 6)) {
    const double y = top + (1.0 - (t - ymin) / (ymax - ymin)) * ph;
    const std::string label = opts.log_y ? fmt::format("1e{}", format_number(t)) : format_number(t);
    out += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"#ddd\"/>"
                       "<text x=\"{3:.1f}\" y=\"{4:.1f}\" text-anchor=\"end\">{5}</text>\n",
                       left, y, left + pw, left - 6, y + 4, label);
  }
  out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", left + pw / 2,
                     static_cast<double>(opts.height) - 12, escape_xml(opts.x_label));
  out += fmt::format("<text x=\"18\" y=\"{0:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0:.1f})\">{1}"
                     "</text>\n",
                     top + ph / 2, escape_xml(opts.y_label));

  double legend_y = top + 10;
  std::vector<std::string> seen;
  for (const auto& s : series) {
    std::string pts;
    std::string marks;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (opts.log_y && s.y[i] <= 0)) continue;
      const double x = px(s.x[i]), y = py(s.y[i]);
      pts += fmt::format("{:.2f},{:.2f} ", x, y);
      if (s.markers)
        marks += fmt::format("M{:.2f} {:.2f}l6 6m0 -6l-6 6 ", x - 3, y - 3);
    }
    if (s.line && !pts.empty())
      out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", s.color, pts);
    if (s.markers && !marks.empty())
      out += fmt::format("<path fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" d=\"{}\"/>\n", s.color, marks);
    if (!s.name.empty() && std::find(seen.begin(), seen.end(), s.name) == seen.end()) {
      seen.push_back(s.name);
      out += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"{3}\" "
                         "stroke-width=\"2\"/><text x=\"{4:.1f}\" y=\"{5:.1f}\">{6}</text>\n",
                         left + pw + 10, legend_y, left + pw + 30, s.color, left + pw + 35, legend_y + 4,
                         escape_xml(s.name));
      legend_y += 18;
    }
  }
  out += "</svg>\n";
  return out;
}

CsvTable bands_table(const BandStructureResult& result) {
  CsvTable t({"k_index", "path_distance", "band", "energy_vqd", "energy_exact", "iterations", "cost_evals", "seed"});
  for (const auto& p : result.points) {
    t.row({std::to_string(p.k_index), format_number(p.path_distance), std::to_string(p.band),
           format_number(p.energy_vqd), format_number(p.energy_exact), std::to_string(p.iterations),
           std::to_string(p.cost_evals), std::to_string(p.seed)});
  }
  return t;
}

std::string bands_svg(const BandStructureResult& result, const std::string& title) {
  std::vector<ChartSeries> series;
  const std::size_t nk = result.kpoints.size();
  for (std::size_t b = 0; b < result.num_orbitals; ++b) {
    ChartSeries s{"exact", {}, {}, "#1f4e9c", true, false};
    for (std::size_t k = 0; k < nk; ++k) {
      s.x.push_back(result.kpoints[k].path_distance);
      s.y.push_back(result.exact[k][b]);
    }
    series.push_back(std::move(s));
  }
  ChartSeries v{"VQD", {}, {}, "#c0392b", false, true};
  for (const auto& p : result.points) {
    v.x.push_back(p.path_distance);
    v.y.push_back(p.energy_vqd);
  }
  series.push_back(std::move(v));
  return svg_chart(series, {title, "k-path distance", "energy (eV)"});
}

}  // namespace tbvqd
