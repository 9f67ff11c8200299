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

#include "cossc/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "cossc/error.hpp"
#include "cossc/solver.hpp"
#include "test_support.hpp"

namespace cossc {
namespace {

using testing::Rng;
using WeightList = std::vector<std::pair<std::pair<int, int>, double>>;

SimilarityGraph single_edge(double a = 1.0) {
  const WeightList w = {{{0, 1}, a}};
  return SimilarityGraph::from_weights(2, w);
}

// Two unit triangles joined by a weight-1 bridge (2, 3).
SimilarityGraph bridged_triangles() {
  const WeightList w = {{{0, 1}, 1.0}, {{1, 2}, 1.0}, {{0, 2}, 1.0}, {{2, 3}, 1.0},
                        {{3, 4}, 1.0}, {{4, 5}, 1.0}, {{3, 5}, 1.0}};
  return SimilarityGraph::from_weights(6, w);
}

// Small random connected-or-not instance with at most `max_edges` edges.
SimilarityGraph tiny_instance(Rng& rng, int max_edges) {
  const int n = testing::uniform_int(rng, 3, 7);
  return testing::random_graph(rng, n, testing::uniform_int(rng, 2, std::min(max_edges, n * (n - 1) / 2)));
}

TEST(Phi, EmptyIndicatorIsZero) {
  EXPECT_EQ(phi(bridged_triangles(), EdgeIndicator::zeros(7), 0.3, 2), 0.0);
}

TEST(Phi, SingleEdgeTable) {
  const auto g = single_edge();
  EXPECT_NEAR(phi(g, EdgeIndicator::ones(1), 0.5, 1), -1.0, 1e-15);
  EXPECT_NEAR(phi(g, EdgeIndicator::zeros(1), 0.5, 1), 0.0, 1e-15);
  const auto r = brute_force_mip(g, 0.5, 1);
  EXPECT_NEAR(r.global_value, -1.0, 1e-15);
  ASSERT_EQ(r.minimizer_masks.size(), 1u);
  EXPECT_EQ(r.minimizer_masks[0], 1u);
  EXPECT_EQ(r.phi_table.size(), 2u);
}

TEST(Phi, MatchesMinimumOverEmbeddings) {
  // phi is f minimized over H, attained by the d smallest eigenvectors.
  Rng rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = tiny_instance(rng, 12);
    const int d = testing::uniform_int(rng, 1, g.n() - 1);
    const auto z = testing::random_mask(rng, g.num_edges());
    const double beta = testing::uniform(rng, 0.01, 1.0);
    const auto hs = h_step(g, z, d, 1e-12);
    EXPECT_NEAR(phi(g, z, beta, d), objective(g, z, hs.h, beta), 1e-9);
    const auto h = testing::random_embedding(rng, g.n(), d);
    EXPECT_LE(phi(g, z, beta, d), objective(g, z, h, beta) + 1e-12);
  }
}

TEST(BruteForce, TableSizeAndMinimum) {
  Rng rng(72);
  const auto g = tiny_instance(rng, 10);
  const auto r = brute_force_mip(g, 0.2, 2);
  EXPECT_EQ(r.phi_table.size(), std::size_t{1} << g.num_edges());
  EXPECT_EQ(r.global_value, *std::min_element(r.phi_table.begin(), r.phi_table.end()));
  for (std::size_t k = 0; k < r.minimizer_masks.size(); ++k) {
    EXPECT_EQ(r.minimizers[k], mask_to_indicator(r.minimizer_masks[k], g.num_edges()));
  }
}

TEST(BruteForce, GuardRefusesLargeGraphs) {
  Rng rng(73);
  const auto g = testing::random_graph(rng, 12, 21);
  ASSERT_EQ(g.num_edges(), 21u);
  try {
    brute_force_mip(g, 0.1, 2);
    FAIL() << "expected GuardError";
  } catch (const GuardError& e) {
    EXPECT_EQ(e.limit(), kOracleEdgeGuard);
  }
  EXPECT_THROW(compute_beta_bar(g, 1.0), GuardError);
}

TEST(BruteForce, LargeBetaKeepsEveryEdge) {
  Rng rng(74);
  for (int trial = 0; trial < 15; ++trial) {
    const auto g = tiny_instance(rng, 12);
    const int comps = base_component_count(g);
    if (comps >= g.n()) continue;
    const int d = testing::uniform_int(rng, comps, g.n() - 1);
    const auto r = brute_force_mip(g, 1.5, d);
    EXPECT_EQ(check_large_beta(g, r, 1.5, d), Verdict::Pass);
    EXPECT_EQ(check_large_beta(g, r, 0.5, d), Verdict::NotApplicable);
  }
}

TEST(BruteForce, SmallBetaGivesExactRank) {
  Rng rng(75);
  for (int trial = 0; trial < 15; ++trial) {
    const auto g = tiny_instance(rng, 12);
    const int comps = base_component_count(g);
    if (comps >= g.n()) continue;
    const int d = testing::uniform_int(rng, comps, g.n() - 1);
    const auto bar = compute_beta_bar(g, 1.0);
    const double beta = 0.5 * bar.value;
    const auto r = brute_force_mip(g, beta, d);
    EXPECT_EQ(check_small_beta(g, r, beta, d, bar), Verdict::Pass);
    EXPECT_EQ(check_small_beta(g, r, 2 * bar.value, d, bar), Verdict::NotApplicable);
  }
}

TEST(BruteForce, TrichotomyHolds) {
  Rng rng(76);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = tiny_instance(rng, 12);
    const int comps = base_component_count(g);
    const int d = testing::uniform_int(rng, std::max(1, comps), g.n());
    const auto r = brute_force_mip(g, testing::uniform(rng, 0.001, 2.0), d);
    EXPECT_EQ(check_trichotomy(g, r, d), Verdict::Pass);
  }
}

TEST(BruteForce, RelaxationNeverBeatsBinaryOptimum) {
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = tiny_instance(rng, 10);
    const int d = testing::uniform_int(rng, 1, g.n() - 1);
    const double beta = testing::uniform(rng, 0.001, 1.5);
    const auto r = brute_force_mip(g, beta, d);
    EXPECT_GE(relaxation_margin(g, r, beta, d, 200, static_cast<std::uint64_t>(trial)), -1e-9);
  }
}

TEST(Ceiling, ZeroGradientEntriesCanBeRoundedUp) {
  Rng rng(78);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = tiny_instance(rng, 12);
    const int d = testing::uniform_int(rng, 1, g.n() - 1);
    const auto h = testing::random_embedding(rng, g.n(), d);
    // Pick beta so that edge 0 has exactly zero gradient.
    const Edge& e0 = g.edge(0);
    const double beta = e0.a * edge_spread(h, e0.i, e0.j) / (2 * e0.abar);
    auto grad = grad_z(g, h, beta);
    grad[0] = 0.0;
    std::vector<double> v(g.num_edges());
    for (std::size_t e = 0; e < v.size(); ++e) v[e] = grad[e] < 0 ? 1.0 : 0.0;
    v[0] = testing::uniform(rng, 0.05, 0.95);
    const EdgeIndicator z(v);
    const auto rep = check_blockwise(g, z.ceil(), h, beta, 1e-9);
    EXPECT_LE(rep.z_gap, 1e-9);
    EXPECT_NEAR(objective(g, z.ceil(), h, beta), objective(g, z, h, beta), 1e-9);
  }
}

TEST(BetaBar, SingleUnitEdge) {
  const auto b = compute_beta_bar(single_edge(), 1.0);
  EXPECT_DOUBLE_EQ(b.lambda_plus_min, 2.0);
  EXPECT_DOUBLE_EQ(b.weight_sum, 2.0);
  EXPECT_DOUBLE_EQ(b.alpha, 1.0);
  EXPECT_NEAR(b.value, 1.0, 1e-14);
  EXPECT_TRUE(b.empty_mustlinks);
}

TEST(BetaBar, InvariantUnderWeightScaling) {
  Rng rng(79);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = tiny_instance(rng, 10);
    const auto j = MustLinkSet({{g.edge(0).i, g.edge(0).j}});
    WeightList w;
    for (const Edge& e : g.edges()) w.push_back({{e.i, e.j}, 3.7 * e.a});
    const auto scaled = SimilarityGraph::from_weights(g.n(), w);
    const auto a = compute_beta_bar(scale_must_links(g, j, 10.0), 10.0);
    const auto b = compute_beta_bar(scale_must_links(scaled, j, 10.0), 10.0);
    EXPECT_NEAR(a.value, b.value, 1e-12 * a.value);
    EXPECT_FALSE(a.empty_mustlinks);
  }
}

TEST(BetaBar, EmptyMustLinksUseScaleOnly) {
  Rng rng(80);
  const auto g = tiny_instance(rng, 10);
  EXPECT_DOUBLE_EQ(compute_beta_bar(g, 4.0).alpha, 4.0);
}

TEST(MustLinkGuarantee, HoldsOnSolverOutput) {
  Rng rng(81);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = testing::uniform_int(rng, 6, 30);
    const auto base = testing::random_graph(rng, n, 3 * n);
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t e = 0; e < base.num_edges(); e += 4) pairs.emplace_back(base.edge(e).i, base.edge(e).j);
    const MustLinkSet j(pairs);
    SolverConfig c;
    c.d = 3;
    c.beta = 0.3;  // beta p = 3
    const auto g = scale_must_links(base, j, c.p);
    const auto r = cossc_solve(g, c);
    EXPECT_EQ(verify_mustlink_theorem(g, j, *c.beta, c.p, r.z, r.h, c.eps), Verdict::Pass);
  }
}

TEST(MustLinkGuarantee, NotApplicableBelowScaleThreshold) {
  // Enumeration shows the bridge, a must-link, is removed by every
  // minimizer at d = 2 and tiny beta without scaling: the conclusion
  // fails, but the hypothesis beta p > 2 does not hold either.
  const auto base = bridged_triangles();
  const MustLinkSet j({{2, 3}});
  const double beta = 0.01, p = 1.0;
  const auto g = scale_must_links(base, j, p);
  const auto r = brute_force_mip(g, beta, 2);
  const std::size_t bridge = *g.find_edge(2, 3);
  for (const auto& z : r.minimizers) EXPECT_EQ(z[bridge], 0.0);

  const auto hs = h_step(g, r.minimizers[0], 2, 1e-12);
  EXPECT_EQ(verify_mustlink_theorem(g, j, beta, p, r.minimizers[0], hs.h, 1e-3), Verdict::NotApplicable);
}

TEST(MustLinkGuarantee, UnitScaleThresholdOnlyTies) {
  // At beta p = 1 dropping the bridge lowers the eigenvalue sum by at most
  // 2a, exactly the reward lost, so some minimizer keeps it.
  const MustLinkSet j({{2, 3}});
  const double beta = 0.01, p = 100.0;
  const auto g = scale_must_links(bridged_triangles(), j, p);
  const auto r = brute_force_mip(g, beta, 2);
  const std::size_t bridge = *g.find_edge(2, 3);
  bool kept = false;
  for (const auto& z : r.minimizers) kept = kept || z[bridge] == 1.0;
  EXPECT_TRUE(kept);
  const auto hs = h_step(g, r.minimizers[0], 2, 1e-12);
  EXPECT_EQ(verify_mustlink_theorem(g, j, beta, p, r.minimizers[0], hs.h, 1e-3), Verdict::NotApplicable);
}

TEST(MustLinkGuarantee, EmptySetPassesVacuously) {
  const auto g = bridged_triangles();
  const auto h = h_step(g, EdgeIndicator::ones(7), 2, 1e-9).h;
  EXPECT_EQ(verify_mustlink_theorem(g, MustLinkSet{}, 0.01, 1.0, EdgeIndicator::zeros(7), h, 1e-3),
            Verdict::Pass);
}

TEST(MustLinkGuarantee, UnmetGapPreconditionIsNotApplicable) {
  const auto g = scale_must_links(bridged_triangles(), MustLinkSet({{0, 1}}), 10.0);
  const auto h = h_step(g, EdgeIndicator::ones(7), 2, 1e-9).h;
  // Z = 0 is far from blockwise optimal at beta = 0.5.
  EXPECT_EQ(verify_mustlink_theorem(g, MustLinkSet({{0, 1}}), 0.5, 10.0, EdgeIndicator::zeros(7), h, 1e-3),
            Verdict::NotApplicable);
  // eps_gap must stay below twice the smallest must-link weight.
  EXPECT_EQ(verify_mustlink_theorem(g, MustLinkSet({{0, 1}}), 0.5, 10.0, EdgeIndicator::ones(7), h, 2.0),
            Verdict::NotApplicable);
}

TEST(Verdict, Names) {
  EXPECT_EQ(to_string(Verdict::Pass), "pass");
  EXPECT_EQ(to_string(Verdict::Fail), "fail");
  EXPECT_EQ(to_string(Verdict::NotApplicable), "not_applicable");
}

}  // namespace
}  // namespace cossc
