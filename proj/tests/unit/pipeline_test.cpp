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

#include "cossc/pipeline.hpp"

#include <gtest/gtest.h>

#include "cossc/data.hpp"
#include "cossc/error.hpp"
#include "test_support.hpp"

namespace cossc {
namespace {

TEST(Pipeline, SeparatedShapeEndToEnd) {
  const auto ds = generate({Shape::ThreeCircles, 60, 0.01, 1});
  const auto base = build_knn_similarity(ds.points);
  const auto j = sample_mustlinks_within(ds.truth, base, 10.0, 1);
  SolverConfig c;
  c.d = 3;
  int calls = 0;
  const auto r = run_cossc(base, j, c, false, [&](int, const EdgeIndicator&) { ++calls; });
  EXPECT_EQ(calls, r.solve.trace.iterations + 1);
  EXPECT_EQ(r.graph.num_mustlinks(), j.size());
  const auto rep = evaluate(r, std::span<const int>(ds.truth.labels), &j);
  ASSERT_TRUE(rep.acc && rep.nmi && rep.rmv);
  EXPECT_DOUBLE_EQ(*rep.acc, 1.0);
  EXPECT_DOUBLE_EQ(*rep.nmi, 1.0);
  EXPECT_EQ(*rep.rmv, 0.0);
  EXPECT_EQ(rep.num_clusters, 3);
  EXPECT_EQ(rep.iterations, r.solve.trace.iterations);
  EXPECT_DOUBLE_EQ(rep.f_final, r.solve.trace.f_history.back());
}

TEST(Pipeline, EvaluateWithoutTruthOrMustLinks) {
  testing::Rng rng(2);
  const auto g = testing::random_graph(rng, 12, 25);
  SolverConfig c;
  c.d = 2;
  const auto r = run_cossc(g, MustLinkSet{}, c);
  const auto rep = evaluate(r, std::nullopt, nullptr);
  EXPECT_FALSE(rep.acc.has_value());
  EXPECT_FALSE(rep.rmv.has_value());
  EXPECT_EQ(rep.num_clusters, r.assignment.num_clusters);
}

TEST(Pipeline, MissingMustLinkIsInfeasibleUnlessInjected) {
  const std::vector<std::pair<std::pair<int, int>, double>> w = {{{0, 1}, 1.0}, {{2, 3}, 1.0}, {{1, 2}, 0.5}};
  const auto g = SimilarityGraph::from_weights(4, w);
  const MustLinkSet j({{0, 3}});
  SolverConfig c;
  c.d = 2;
  EXPECT_THROW(run_cossc(g, j, c), InfeasibleConstraintError);
  const auto r = run_cossc(g, j, c, true);
  EXPECT_EQ(r.graph.num_edges(), 4u);
  EXPECT_EQ(evaluate(r, std::nullopt, &j).rmv, 0.0);
}

}  // namespace
}  // namespace cossc
