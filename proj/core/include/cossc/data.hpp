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
#include <span>
#include <string_view>
#include <vector>

#include "cossc/extract.hpp"
#include "cossc/graph.hpp"
#include "cossc/metrics.hpp"

namespace cossc {

enum class Shape { ThreeCircles, SmileFaces, ThreeParts, TwoBlocksInCircle, TwoMoons, FourBlocksNoise };

inline constexpr Shape kAllShapes[] = {Shape::ThreeCircles,      Shape::SmileFaces,
                                       Shape::ThreeParts,        Shape::TwoBlocksInCircle,
                                       Shape::TwoMoons,          Shape::FourBlocksNoise};

/// Command-line token, e.g. "two-moons".
std::string_view to_string(Shape s);
std::optional<Shape> parse_shape(std::string_view token);

/// Number of ideal clusters the shape is built from.
int ideal_clusters(Shape s);

struct SyntheticSpec {
  Shape shape = Shape::TwoMoons;
  int n_per_cluster = 200;
  double noise = 0.01;  // std-dev of the per-coordinate perturbation
  std::uint64_t seed = 0;
};

struct GroundTruth {
  std::vector<int> labels;
};

struct Dataset {
  PointCloud points;
  GroundTruth truth;
};

/// Points are laid out evenly (stratified) along each generating curve or
/// over each generating region, then perturbed by a bounded uniform offset
/// per coordinate whose standard deviation is `noise`. Every cluster has
/// exactly n_per_cluster points; labels follow construction order.
Dataset generate(const SyntheticSpec& spec);

/// Uniform sample without replacement of floor(s% of candidates) edges of
/// `g` whose endpoints share a truth label.
MustLinkSet sample_mustlinks_within(const GroundTruth& truth, const SimilarityGraph& g,
                                    double s_percent, std::uint64_t seed);

/// Leading floor(fraction * |E|) edges of a random permutation of `g`'s edges.
MustLinkSet sample_mustlinks_uniform(const SimilarityGraph& g, double fraction,
                                     std::uint64_t seed);

// File formats: 0-based indices; points and labels are comma-separated,
// edges and must-links tab-separated. Blank lines and lines starting with
// '#' are skipped. Loaders throw ParseError naming the offending line.

PointCloud load_points(const std::filesystem::path& path);
/// `n` defaults to one past the largest index seen.
SimilarityGraph load_edges(const std::filesystem::path& path, std::optional<int> n = std::nullopt);
MustLinkSet load_mustlinks(const std::filesystem::path& path, std::optional<int> n = std::nullopt);
std::vector<int> load_labels(const std::filesystem::path& path);

void save_points(const std::filesystem::path& path, const PointCloud& x);
void save_edges(const std::filesystem::path& path, const SimilarityGraph& g);
void save_mustlinks(const std::filesystem::path& path, const MustLinkSet& j);
void save_labels(const std::filesystem::path& path, std::span<const int> labels);
void save_labels(const std::filesystem::path& path, const ClusterAssignment& c);
/// Flat JSON object; unset metrics are omitted.
void save_report(const std::filesystem::path& path, const EvalReport& r);

}  // namespace cossc
