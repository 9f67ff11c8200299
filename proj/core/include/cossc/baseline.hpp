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
#include <vector>

#include <Eigen/Dense>

#include "cossc/extract.hpp"
#include "cossc/graph.hpp"

namespace cossc {

/// Similarity with every must-link pair set to weight 1; pairs that are
/// not edges are created with weight 1. Other weights are kept.
SimilarityGraph sca_similarity(const SimilarityGraph& g, const MustLinkSet& j);

struct KMeansOptions {
  int restarts = 10;
  int max_iter = 300;
  double tol = 1e-9;  // stop when no centroid moves farther than this
  std::uint64_t seed = 0;
};

struct KMeansResult {
  std::vector<int> labels;
  Eigen::MatrixXd centroids;  // k x dim
  double inertia = 0.0;
  int restarts_used = 0;
  int best_restart = 0;
  /// Inertia after each assignment pass of the winning restart.
  std::vector<double> inertia_history;
};

/// Lloyd iterations from k-means++ seeds; the best of `restarts` runs is
/// kept, ties going to the earliest restart. A cluster that empties is
/// re-seeded at the point farthest from its current centroid.
KMeansResult kmeans(const Eigen::MatrixXd& rows, int k, const KMeansOptions& opts = {});

/// Rows of the k smallest eigenvectors of the unnormalized Laplacian,
/// clustered by kmeans. Labels are renumbered by first appearance.
ClusterAssignment spectral_cluster(const SimilarityGraph& g, int k, std::uint64_t seed,
                                   const KMeansOptions& opts = {});

}  // namespace cossc
