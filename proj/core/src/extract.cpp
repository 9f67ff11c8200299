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

#include "cossc/extract.hpp"

#include "cossc/error.hpp"

namespace cossc {

ClusterAssignment extract_clusters(const SimilarityGraph& g, const EdgeIndicator& z) {
  if (z.size() != g.num_edges()) throw ContractError("indicator length does not match edges");
  if (!z.is_binary()) throw ContractError("cluster extraction needs a binary indicator");
  auto comp = connected_components(g, z.values());
  ClusterAssignment out;
  out.labels = std::move(comp.labels);
  out.num_clusters = comp.count;
  out.surviving_edges.resize(z.size());
  for (std::size_t e = 0; e < z.size(); ++e) out.surviving_edges[e] = z[e] != 0.0;
  return out;
}

bool cross_check_rank(const SimilarityGraph& g, const EdgeIndicator& z,
                      const ClusterAssignment& assignment, std::optional<double> rank_tol) {
  const auto lap = g.laplacian(z.values());
  return assignment.num_clusters == g.n() - linalg::numerical_rank(lap, rank_tol);
}

}  // namespace cossc
