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

// CSV tables and minimal SVG polyline charts. Numbers are printed with a
// fixed format so identical inputs give byte-identical files.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tbvqd/vqd.hpp"

namespace tbvqd {

/// %.12g, with "nan" / "inf" / "-inf" for non-finite values.
std::string format_number(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row(std::vector<std::string> cells);
  std::size_t num_rows() const noexcept { return rows_.size(); }
  const std::vector<std::string>& header() const noexcept { return header_; }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text_file(const std::filesystem::path& path, const std::string& content);

struct ChartSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f4e9c";
  bool line = true;     // polyline
  bool markers = false; // crosses at every point
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  int width = 720;
  int height = 480;
};

std::string svg_chart(const std::vector<ChartSeries>& series, const ChartOptions& opts);

/// Columns k_index, path_distance, band, energy_vqd, energy_exact, iterations, cost_evals, seed.
CsvTable bands_table(const BandStructureResult& result);

/// Exact bands as lines, VQD energies as crosses.
std::string bands_svg(const BandStructureResult& result, const std::string& title);

}  // namespace tbvqd
