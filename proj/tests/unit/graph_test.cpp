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

#include "cossc/graph.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "cossc/error.hpp"
#include "test_support.hpp"

namespace cossc {
namespace {

using testing::Rng;

SimilarityGraph raw(int n, std::vector<std::pair<std::pair<int, int>, double>> w) {
  return SimilarityGraph::from_weights(n, w);
}

PointCloud two_blobs(Rng& rng, int per, double spread, double gap) {
  PointCloud x;
  x.points.resize(2 * per, 2);
  for (int i = 0; i < 2 * per; ++i) {
    const double cx = i < per ? 0.0 : gap;
    x.points(i, 0) = cx + testing::uniform(rng, -spread, spread);
    x.points(i, 1) = testing::uniform(rng, -spread, spread);
  }
  return x;
}

TEST(AutoKnn, NaturalLogCeiling) {
  EXPECT_EQ(auto_knn(8), 3);
  EXPECT_EQ(auto_knn(100), 5);
  EXPECT_EQ(auto_knn(2), 1);
  EXPECT_EQ(auto_knn(1), 1);
}

TEST(RowNormalize, UnitDegreesUnchanged) {
  const auto g = row_normalize_symmetrize(raw(2, {{{0, 1}, 1.0}}));
  EXPECT_DOUBLE_EQ(g.edge(0).a, 1.0);
}

TEST(RowNormalize, UniformScaleRemoved) {
  const auto g = row_normalize_symmetrize(raw(2, {{{0, 1}, 2.0}}));
  EXPECT_DOUBLE_EQ(g.edge(0).a, 1.0);
}

TEST(RowNormalize, PathAveragesBothDirections) {
  const auto g = row_normalize_symmetrize(raw(3, {{{0, 1}, 1.0}, {{1, 2}, 1.0}}));
  // Degrees 1, 2, 1: (1/1 + 1/2) / 2.
  EXPECT_DOUBLE_EQ(g.edge(0).a, (1.0 / 1.0 + 1.0 / 2.0) / 2.0);
  EXPECT_DOUBLE_EQ(g.edge(1).a, 0.75);
}

// Evenly spread blobs: 5 x 10 grids with small jitter, 200 apart.
TEST(BuildKnn, SeparatedGridBlobsGiveTwoComponents) {
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    PointCloud x;
    x.points.resize(100, 2);
    for (int i = 0; i < 100; ++i) {
      const int k = i % 50;
      x.points(i, 0) = (i < 50 ? 0.0 : 200.0) + 0.2 * (k % 10) + testing::uniform(rng, -0.05, 0.05);
      x.points(i, 1) = 0.2 * (k / 10) + testing::uniform(rng, -0.05, 0.05);
    }
    const auto g = build_knn_similarity(x);
    EXPECT_EQ(connected_components(g).count, 2) << "seed " << seed;
  }
}

TEST(BuildKnn, SeparatedBlobsAreNeverJoined) {
  Rng rng(21);
  const auto x = two_blobs(rng, 50, 1.0, 200.0);
  const auto g = build_knn_similarity(x);
  // Mutual neighborhoods may split a blob further, but never join the two.
  EXPECT_GE(connected_components(g).count, 2);
  for (const Edge& e : g.edges()) EXPECT_EQ(e.i < 50, e.j < 50);
}

TEST(BuildKnn, EdgesAreMutualNeighbors) {
  Rng rng(22);
  PointCloud x;
  x.points = Eigen::MatrixXd::Random(40, 3);
  const int k = 4;
  KnnGraphOptions opts;
  opts.k_n = k;
  const auto g = build_knn_similarity(x, opts);

  // Reference: brute-force kNN sets by sorting distances.
  auto knn = [&](int i) {
    std::vector<std::pair<double, int>> d;
    for (int j = 0; j < 40; ++j) {
      if (j != i) d.push_back({(x.points.row(i) - x.points.row(j)).norm(), j});
    }
    std::sort(d.begin(), d.end());
    std::set<int> s;
    for (int t = 0; t < k; ++t) s.insert(d[t].second);
    return s;
  };
  std::set<std::pair<int, int>> expect;
  for (int i = 0; i < 40; ++i) {
    for (int j : knn(i)) {
      if (i < j && knn(j).count(i)) expect.insert({i, j});
    }
  }
  std::set<std::pair<int, int>> got;
  for (const Edge& e : g.edges()) got.insert({e.i, e.j});
  EXPECT_EQ(got, expect);
}

TEST(BuildKnn, WeightsFollowLocalScaling) {
  PointCloud x;
  x.points.resize(3, 1);
  x.points << 0.0, 1.0, 3.0;
  KnnGraphOptions opts;
  opts.k_n = 2;
  opts.sigma_index = 1;
  const auto g = build_knn_similarity(x, opts);
  // Complete graph; sigma = nearest-neighbor distance: 1, 1, 2.
  const double w01 = std::exp(-1.0 / 1.0), w02 = std::exp(-9.0 / 2.0), w12 = std::exp(-4.0 / 2.0);
  const double d0 = w01 + w02, d1 = w01 + w12, d2 = w02 + w12;
  ASSERT_EQ(g.num_edges(), 3u);
  EXPECT_NEAR(g.edge(0).a, 0.5 * (w01 / d0 + w01 / d1), 1e-15);
  EXPECT_NEAR(g.edge(1).a, 0.5 * (w02 / d0 + w02 / d2), 1e-15);
  EXPECT_NEAR(g.edge(2).a, 0.5 * (w12 / d1 + w12 / d2), 1e-15);
}

TEST(BuildKnn, IdenticalPointsGiveCompleteGraph) {
  PointCloud x;
  x.points = Eigen::MatrixXd::Ones(5, 2);
  const auto g = build_knn_similarity(x);
  EXPECT_EQ(g.num_edges(), 10u);
  for (const Edge& e : g.edges()) EXPECT_DOUBLE_EQ(e.a, 0.25);
}

TEST(BuildKnn, RejectsTinyOrNonFiniteInput) {
  PointCloud one;
  one.points = Eigen::MatrixXd::Zero(1, 2);
  EXPECT_THROW(build_knn_similarity(one), ContractError);
  PointCloud bad;
  bad.points = Eigen::MatrixXd::Zero(3, 2);
  bad.points(1, 1) = std::nan("");
  EXPECT_THROW(build_knn_similarity(bad), ContractError);
}

TEST(BuildKnn, SymmetricSupportAndDeterministic) {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    PointCloud x;
    x.points.resize(testing::uniform_int(rng, 10, 80), 2);
    for (int i = 0; i < x.n(); ++i) {
      x.points(i, 0) = testing::uniform(rng, 0, 1);
      x.points(i, 1) = testing::uniform(rng, 0, 1);
    }
    const auto a = build_knn_similarity(x);
    const auto b = build_knn_similarity(x);
    ASSERT_EQ(a.num_edges(), b.num_edges());
    for (std::size_t e = 0; e < a.num_edges(); ++e) {
      EXPECT_LT(a.edge(e).i, a.edge(e).j);
      EXPECT_GT(a.edge(e).a, 0.0);
      EXPECT_EQ(a.edge(e).a, b.edge(e).a);
      EXPECT_EQ(a.edge(e).abar, a.edge(e).a);
    }
    const auto l = a.laplacian().to_dense();
    EXPECT_EQ(l, l.transpose());
    EXPECT_EQ(connected_components(a).count, a.n() - linalg::numerical_rank(a.laplacian()));
  }
}

TEST(ScaleMustLinks, ScalesOnlyListedEdges) {
  const auto g = raw(3, {{{0, 1}, 0.2}, {{1, 2}, 0.5}});
  const auto s = scale_must_links(g, MustLinkSet({{0, 1}}), 10.0);
  EXPECT_DOUBLE_EQ(s.edge(0).abar, 2.0);
  EXPECT_TRUE(s.edge(0).mustlink);
  EXPECT_DOUBLE_EQ(s.edge(1).abar, 0.5);
  EXPECT_FALSE(s.edge(1).mustlink);
  EXPECT_DOUBLE_EQ(s.edge(0).a, 0.2);
}

TEST(ScaleMustLinks, EmptySetOrUnitScaleIsNoOp) {
  const auto g = raw(3, {{{0, 1}, 0.2}, {{1, 2}, 0.5}});
  for (const auto& s : {scale_must_links(g, MustLinkSet{}, 7.0), scale_must_links(g, MustLinkSet({{1, 2}}), 1.0)}) {
    for (std::size_t e = 0; e < 2; ++e) EXPECT_EQ(s.edge(e).abar, s.edge(e).a);
  }
}

TEST(ScaleMustLinks, SecondApplicationWithUnitScaleLeavesStructure) {
  const auto g = raw(4, {{{0, 1}, 0.2}, {{1, 2}, 0.5}, {{2, 3}, 0.7}});
  const MustLinkSet j({{0, 1}, {2, 3}});
  const auto once = scale_must_links(g, j, 10.0);
  const auto twice = scale_must_links(once, j, 1.0);
  ASSERT_EQ(once.num_edges(), twice.num_edges());
  for (std::size_t e = 0; e < once.num_edges(); ++e) {
    EXPECT_EQ(once.edge(e).i, twice.edge(e).i);
    EXPECT_EQ(once.edge(e).j, twice.edge(e).j);
    EXPECT_EQ(once.edge(e).a, twice.edge(e).a);
    EXPECT_EQ(once.edge(e).mustlink, twice.edge(e).mustlink);
  }
  // Recomputing from A with the same p reproduces the scaled weights.
  const auto again = scale_must_links(once, j, 10.0);
  for (std::size_t e = 0; e < once.num_edges(); ++e) EXPECT_EQ(once.edge(e).abar, again.edge(e).abar);
}

TEST(ScaleMustLinks, NonEdgeIsInfeasible) {
  const auto g = raw(3, {{{0, 1}, 0.2}, {{1, 2}, 0.5}});
  try {
    scale_must_links(g, MustLinkSet({{0, 2}}), 10.0);
    FAIL() << "expected InfeasibleConstraintError";
  } catch (const InfeasibleConstraintError& e) {
    ASSERT_EQ(e.pairs().size(), 1u);
    EXPECT_EQ(e.pairs()[0], std::make_pair(0, 2));
  }
}

TEST(ScaleMustLinks, InjectedEdgeUsesMeanWeight) {
  const auto g = raw(3, {{{0, 1}, 0.2}, {{1, 2}, 0.6}});
  const auto s = scale_must_links(g, MustLinkSet({{0, 2}}), 10.0, true);
  const auto e = s.find_edge(0, 2);
  ASSERT_TRUE(e.has_value());
  EXPECT_DOUBLE_EQ(s.edge(*e).a, (0.2 + 0.6) / 2);
  EXPECT_DOUBLE_EQ(s.edge(*e).abar, 10.0 * (0.2 + 0.6) / 2);
}

TEST(ValidateMustLinks, ReportsOffendingPairs) {
  const auto g = raw(4, {{{0, 1}, 1.0}, {{1, 2}, 1.0}});
  EXPECT_TRUE(validate_mustlinks(g, MustLinkSet({{1, 0}})));
  const auto v = validate_mustlinks(g, MustLinkSet({{0, 1}, {0, 3}, {2, 9}}));
  EXPECT_FALSE(v);
  EXPECT_EQ(v.missing, (std::vector<std::pair<int, int>>{{0, 3}, {2, 9}}));
}

TEST(MustLinkSet, Canonicalizes) {
  const MustLinkSet j({{3, 1}, {1, 3}, {0, 2}});
  EXPECT_EQ(j.pairs(), (std::vector<std::pair<int, int>>{{0, 2}, {1, 3}}));
  EXPECT_THROW(MustLinkSet({{2, 2}}), ContractError);
  EXPECT_THROW(MustLinkSet({{-1, 2}}), ContractError);
}

TEST(ConnectedComponents, Examples) {
  const std::vector<std::pair<int, int>> two = {{0, 1}, {2, 3}};
  EXPECT_EQ(connected_components(4, two).count, 2);
  const std::vector<std::pair<int, int>> path = {{0, 1}, {1, 2}};
  EXPECT_EQ(connected_components(3, path).count, 1);
  const auto none = connected_components(4, {});
  EXPECT_EQ(none.count, 4);
  EXPECT_EQ(none.labels, (std::vector<int>{0, 1, 2, 3}));
}

TEST(ConnectedComponents, LabelsInDiscoveryOrder) {
  const std::vector<std::pair<int, int>> e = {{3, 4}, {0, 4}, {1, 2}};
  const auto c = connected_components(5, e);
  EXPECT_EQ(c.labels, (std::vector<int>{0, 1, 1, 0, 0}));
}

TEST(ConnectedComponents, MatchesUnionFind) {
  Rng rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = testing::uniform_int(rng, 1, 40);
    const auto g = testing::random_graph(rng, n, testing::uniform_int(rng, 0, 2 * n));
    const auto z = testing::random_mask(rng, g.num_edges(), 0.6);
    std::vector<std::pair<int, int>> kept;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      if (z[e] == 1.0) kept.emplace_back(g.edge(e).i, g.edge(e).j);
    }
    EXPECT_EQ(connected_components(g, z.values()).count, testing::union_find_components(n, kept));
  }
}

TEST(SimilarityGraph, RejectsInvalidEdges) {
  EXPECT_THROW(SimilarityGraph(2, {{1, 0, 1.0, 1.0, false}}), ContractError);
  EXPECT_THROW(SimilarityGraph(2, {{0, 1, 0.0, 0.0, false}}), ContractError);
  EXPECT_THROW(SimilarityGraph(2, {{0, 1, 1.0, 0.5, false}}), ContractError);
  EXPECT_THROW(SimilarityGraph(2, {{0, 2, 1.0, 1.0, false}}), ContractError);
  EXPECT_THROW(SimilarityGraph(3, {{0, 1, 1.0, 1.0, false}, {0, 1, 2.0, 2.0, false}}), ContractError);
}

}  // namespace
}  // namespace cossc
