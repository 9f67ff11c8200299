// Copyright 2026 The COSSC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cossc/graph.hpp"

namespace cossc::cli {

/// 2-D scatter colored by label. Kept edges are drawn solid, removed edges
/// dashed.
std::string scatter_svg(const PointCloud& x, const std::vector<int>& labels, const SimilarityGraph& g,
                        const std::vector<bool>& kept);

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

std::string line_plot_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                          const std::vector<Series>& series);

/// values[r][c]; NaN cells are left blank. Color runs white (0) to dark (1).
std::string heatmap_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                        const std::vector<std::string>& cols, const std::vector<std::string>& rows,
                        const std::vector<std::vector<double>>& values);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace cossc::cli
