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

#include <optional>
#include <span>
#include <vector>

#include "cossc/graph.hpp"
#include "cossc/model.hpp"

namespace cossc {

struct EvalReport {
  std::optional<double> acc;  // unset when no ground truth was given
  std::optional<double> nmi;
  std::optional<double> rmv;  // unset when no must-link set was given
  int num_clusters = 0;
  int iterations = 0;
  double f_final = 0.0;
  double time_ms = 0.0;
};

/// Fraction of points correctly labeled under the best one-to-one matching
/// of predicted to true labels. Labels may be arbitrary integers.
double accuracy(std::span<const int> pred, std::span<const int> truth);

/// I(pred; truth) / sqrt(H(pred) H(truth)), natural logarithms. When either
/// side has zero entropy the score is 1 if both are the same single cluster
/// and 0 otherwise.
double nmi(std::span<const int> pred, std::span<const int> truth);

/// Ratio of must-link pairs whose edge was removed; 0 for an empty set.
/// Throws ContractError for a pair that is not an edge of `g`.
double rmv(const SimilarityGraph& g, const EdgeIndicator& z, const MustLinkSet& j);

/// Minimum-cost perfect assignment on a square cost matrix (row-major,
/// k x k). Returns the column assigned to each row.
std::vector<int> solve_assignment(std::span<const double> cost, int k);

}  // namespace cossc
