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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cossc/data.hpp"

namespace cossc::cli {

enum class MustLinkMode { Within, Uniform };

struct BenchSpec {
  std::vector<Shape> shapes;
  std::optional<int> n_per_cluster;  // nullopt: a per-shape size giving n = 300
  double noise = 0.01;
  std::vector<int> d_offsets = {0, 1, 2, 3, 4, 5};  // d = k* + offset
  std::vector<std::string> beta_rules = {"auto"};
  std::vector<double> p_values = {10.0};
  std::vector<double> s_values = {0.0};  // must-link percentage
  MustLinkMode mustlinks = MustLinkMode::Within;
  std::vector<std::string> methods = {"cossc"};
  std::uint64_t seed = 0;
  int repeats = 1;
  int jobs = 1;
  bool resume = false;
  bool plots = true;
};

/// Points per cluster used when n_per_cluster is unset.
int default_points_per_cluster(Shape s);

/// "auto" and "(d-1)/n" give (d - 1) / n; "1/n" and "1/(10n)" scale with n;
/// anything else must parse as a positive number. Throws ContractError.
double resolve_beta_rule(const std::string& rule, int d, int n);

/// Runs every cell, appending one row per run to <out>/results.csv as it
/// completes, then writes SVG plots from the full file. With `resume`,
/// cells already recorded with status ok are skipped. Returns the number
/// of rows whose status is not ok.
int run_bench(const BenchSpec& spec, const std::filesystem::path& out, std::ostream& log);

inline constexpr const char* kBenchColumns =
    "method,shape,n,d,beta_rule,beta,p,s,seed,acc,nmi,rmv,clusters,iters,time_ms,status";

}  // namespace cossc::cli
