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
#include <vector>

#include "cossc/graph.hpp"
#include "cossc/model.hpp"

namespace cossc {

struct ClusterAssignment {
  std::vector<int> labels;           // per point, BFS discovery order
  int num_clusters = 0;
  std::vector<bool> surviving_edges;  // per edge of the source graph
};

/// Clusters are the connected components of the edges kept by Z.
ClusterAssignment extract_clusters(const SimilarityGraph& g, const EdgeIndicator& z);

/// num_clusters == n - rank(L(A o Z)) at the given (or default) tolerance.
bool cross_check_rank(const SimilarityGraph& g, const EdgeIndicator& z,
                      const ClusterAssignment& assignment,
                      std::optional<double> rank_tol = std::nullopt);

}  // namespace cossc
