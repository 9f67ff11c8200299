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

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cossc/linalg.hpp"

namespace cossc {

/// n x m matrix, one data point per row.
struct PointCloud {
  Eigen::MatrixXd points;

  int n() const noexcept { return static_cast<int>(points.rows()); }
  int dim() const noexcept { return static_cast<int>(points.cols()); }
};

/// Throws ContractError unless n >= 2 and every coordinate is finite.
void validate(const PointCloud& x);

/// One undirected edge, canonical i < j. `a` is the similarity weight,
/// `abar` the must-link-scaled weight (equal to `a` off the must-link set).
struct Edge {
  int i = 0;
  int j = 0;
  double a = 0.0;
  double abar = 0.0;
  bool mustlink = false;
};

/// Sparse symmetric nonnegative graph. A and its scaled copy share a single
/// edge list, so their supports are identical by construction. Edges are
/// kept sorted by (i, j).
class SimilarityGraph {
 public:
  SimilarityGraph() = default;
  /// Validates (i < j, a > 0, abar >= a, finite, in range, no duplicates)
  /// and sorts.
  SimilarityGraph(int n, std::vector<Edge> edges);

  /// Plain weighted graph with abar = a and no must-link flags. Pairs may
  /// come in either orientation.
  static SimilarityGraph from_weights(int n, std::span<const std::pair<std::pair<int, int>, double>> w);

  int n() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }

  /// Index of edge {i, j} in edges(), either orientation.
  std::optional<std::size_t> find_edge(int i, int j) const;

  std::size_t num_mustlinks() const;
  /// Mean of the `a` weights; 0 for an empty graph.
  double mean_weight() const;

  /// A o Z (or A when `mask` is empty) as a sparse symmetric matrix.
  linalg::SymMatrix adjacency(std::span<const double> mask = {}) const;
  /// Abar o Z (or Abar when `mask` is empty).
  linalg::SymMatrix scaled_adjacency(std::span<const double> mask = {}) const;
  /// L(A o Z), or L(A) when `mask` is empty.
  linalg::SymMatrix laplacian(std::span<const double> mask = {}) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

/// Unordered index pairs that must end up in the same cluster. Pairs are
/// stored canonically (i < j), sorted, without duplicates.
class MustLinkSet {
 public:
  MustLinkSet() = default;
  /// Canonicalizes and drops duplicates; throws ContractError on i == j or
  /// negative indices.
  explicit MustLinkSet(std::vector<std::pair<int, int>> pairs);

  const std::vector<std::pair<int, int>>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }

 private:
  std::vector<std::pair<int, int>> pairs_;
};

/// max(1, ceil(ln n)).
int auto_knn(int n);

struct KnnGraphOptions {
  std::optional<int> k_n;  // nullopt: auto_knn(n)
  int sigma_index = 7;     // local scale = distance to this neighbor
};

/// Mutual k-nearest-neighbor graph with self-tuning Gaussian weights
/// exp(-|xi - xj|^2 / (sigma_i sigma_j)), then row-normalized and
/// symmetrized. Neighbor sets include every point tied at the k-th distance.
SimilarityGraph build_knn_similarity(const PointCloud& x, const KnnGraphOptions& opts = {});

/// A = (D^-1 W + (D^-1 W)^T) / 2 with D = Diag(W e). Vertices of zero degree
/// pass through unnormalized.
SimilarityGraph row_normalize_symmetrize(const SimilarityGraph& raw);

struct MustLinkValidation {
  bool ok = true;
  std::vector<std::pair<int, int>> missing;  // pairs that are not edges

  explicit operator bool() const noexcept { return ok; }
};

MustLinkValidation validate_mustlinks(const SimilarityGraph& g, const MustLinkSet& j);

/// Adds an edge for every must-link pair outside the support, weighted by the
/// mean of the existing weights. Throws ContractError on an out-of-range pair.
SimilarityGraph inject_missing_edges(const SimilarityGraph& g, const MustLinkSet& j);

/// abar = p * a on must-link edges, abar = a elsewhere; A is untouched.
/// Pairs outside the support throw InfeasibleConstraintError unless
/// `inject_missing` is set.
SimilarityGraph scale_must_links(const SimilarityGraph& g, const MustLinkSet& j, double p,
                                 bool inject_missing = false);

struct Components {
  std::vector<int> labels;  // 0-based, in order of first BFS discovery
  int count = 0;
};

/// Breadth-first components. Roots are taken from vertex 0 upward and
/// neighbors are visited in ascending index order.
Components connected_components(int n, std::span<const std::pair<int, int>> edges);

/// Components of the edges of `g` whose mask value is nonzero (all edges when
/// the mask is empty).
Components connected_components(const SimilarityGraph& g, std::span<const double> mask = {});

}  // namespace cossc
