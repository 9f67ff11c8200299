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

#include "cossc/data.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include "json.hpp"

#include "cossc/error.hpp"
#include "test_support.hpp"

namespace cossc {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("cossc_data_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path file(const std::string& name) const { return path_ / name; }
  fs::path write(const std::string& name, const std::string& body) const {
    std::ofstream(file(name)) << body;
    return file(name);
  }

 private:
  fs::path path_;
};

template <class F>
std::size_t parse_error_line(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "expected ParseError";
  return 0;
}

TEST(Shapes, TokensRoundTrip) {
  for (Shape s : kAllShapes) EXPECT_EQ(parse_shape(to_string(s)), s);
  EXPECT_FALSE(parse_shape("three_circles").has_value());
  EXPECT_EQ(ideal_clusters(Shape::ThreeCircles), 3);
  EXPECT_EQ(ideal_clusters(Shape::SmileFaces), 3);
  EXPECT_EQ(ideal_clusters(Shape::ThreeParts), 3);
  EXPECT_EQ(ideal_clusters(Shape::TwoBlocksInCircle), 3);
  EXPECT_EQ(ideal_clusters(Shape::TwoMoons), 2);
  EXPECT_EQ(ideal_clusters(Shape::FourBlocksNoise), 5);
}

TEST(Generate, SizesLabelsAndDeterminism) {
  for (Shape s : kAllShapes) {
    SyntheticSpec spec{s, 40, 0.01, 5};
    const auto a = generate(spec);
    const auto b = generate(spec);
    const int k = ideal_clusters(s);
    ASSERT_EQ(a.points.n(), 40 * k);
    EXPECT_EQ(a.points.dim(), 2);
    EXPECT_TRUE(a.points.points.isApprox(b.points.points, 0.0));
    std::map<int, int> counts;
    for (int l : a.truth.labels) ++counts[l];
    ASSERT_EQ(static_cast<int>(counts.size()), k);
    for (const auto& [label, count] : counts) EXPECT_EQ(count, 40) << to_string(s);
    spec.seed = 6;
    EXPECT_FALSE(generate(spec).points.points.isApprox(a.points.points)) << to_string(s);
  }
}

TEST(Generate, NoiselessCirclesLieOnTheirRadius) {
  const auto ds = generate({Shape::ThreeCircles, 50, 0.0, 1});
  for (int i = 0; i < ds.points.n(); ++i) {
    EXPECT_NEAR(ds.points.points.row(i).norm(), 1.0 + ds.truth.labels[i], 1e-12);
  }
}

TEST(Generate, NoiseIsBoundedWithRequestedSpread) {
  const double noise = 0.05;
  const auto clean = generate({Shape::ThreeCircles, 400, 0.0, 9});
  const auto noisy = generate({Shape::ThreeCircles, 400, noise, 9});
  // The same seed lays out the same base positions; offsets are the difference.
  double sum2 = 0.0;
  int count = 0;
  for (int i = 0; i < clean.points.n(); ++i) {
    for (int c = 0; c < 2; ++c) {
      const double off = noisy.points.points(i, c) - clean.points.points(i, c);
      EXPECT_LE(std::abs(off), std::sqrt(3.0) * noise + 1e-12);
      sum2 += off * off;
      ++count;
    }
  }
  EXPECT_NEAR(std::sqrt(sum2 / count), noise, 0.1 * noise);
}

TEST(Generate, RejectsBadSpecs) {
  EXPECT_THROW(generate({Shape::TwoMoons, 19, 0.01, 0}), ContractError);
  EXPECT_THROW(generate({Shape::TwoMoons, 50, -0.1, 0}), ContractError);
}

TEST(Generate, SeparatedShapesGiveOneComponentPerCluster) {
  for (Shape s : kAllShapes) {
    const int per = s == Shape::TwoMoons ? 150 : s == Shape::FourBlocksNoise ? 60 : 100;
    const auto ds = generate({s, per, 0.01, 3});
    const auto g = build_knn_similarity(ds.points);
    EXPECT_EQ(connected_components(g).count, ideal_clusters(s)) << to_string(s);
  }
}

TEST(Generate, ThreeCirclesAtNoiseFiveHundredths) {
  const auto ds = generate({Shape::ThreeCircles, 100, 0.05, 0});
  const auto g = build_knn_similarity(ds.points);
  const auto comps = connected_components(g);
  EXPECT_EQ(comps.count, 3);
  EXPECT_DOUBLE_EQ(testing::brute_force_accuracy(comps.labels, ds.truth.labels), 1.0);
}

TEST(MustLinks, WithinClusterFloorCount) {
  const auto ds = generate({Shape::TwoMoons, 50, 0.01, 2});
  const auto g = build_knn_similarity(ds.points);
  std::size_t within = 0;
  for (const Edge& e : g.edges()) within += ds.truth.labels[e.i] == ds.truth.labels[e.j];
  for (double s : {0.0, 5.0, 10.0, 33.3, 100.0}) {
    const auto j = sample_mustlinks_within(ds.truth, g, s, 4);
    EXPECT_EQ(j.size(), static_cast<std::size_t>(std::floor(s * within / 100.0)));
    for (const auto& [a, b] : j.pairs()) {
      EXPECT_EQ(ds.truth.labels[a], ds.truth.labels[b]);
      EXPECT_TRUE(g.find_edge(a, b).has_value());
    }
    EXPECT_TRUE(validate_mustlinks(g, j));
  }
  EXPECT_THROW(sample_mustlinks_within(ds.truth, g, 101.0, 0), ContractError);
}

TEST(MustLinks, UniformFloorCountExamples) {
  testing::Rng rng(3);
  const auto g = testing::random_graph(rng, 10, 17);
  EXPECT_EQ(sample_mustlinks_uniform(g, 0.1, 0).size(), 1u);  // floor(1.7)
  EXPECT_EQ(sample_mustlinks_uniform(g, 0.5, 0).size(), 8u);  // floor(8.5)
  EXPECT_EQ(sample_mustlinks_uniform(g, 0.0, 0).size(), 0u);
  EXPECT_EQ(sample_mustlinks_uniform(g, 1.0, 0).size(), 17u);
  EXPECT_THROW(sample_mustlinks_uniform(g, 1.5, 0), ContractError);
}

TEST(MustLinks, SmallFloorExamples) {
  testing::Rng rng(8);
  const auto g9 = testing::random_graph(rng, 8, 9);
  EXPECT_EQ(sample_mustlinks_uniform(g9, 0.25, 1).size(), 2u);

  // Two 5-cycles, 10 within-cluster edges in total.
  std::vector<std::pair<std::pair<int, int>, double>> w;
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < 5; ++i) {
      const int a = 5 * c + i, b = 5 * c + (i + 1) % 5;
      w.push_back({{std::min(a, b), std::max(a, b)}, 1.0});
    }
  }
  const auto g = SimilarityGraph::from_weights(10, w);
  const GroundTruth truth{{0, 0, 0, 0, 0, 1, 1, 1, 1, 1}};
  EXPECT_EQ(sample_mustlinks_within(truth, g, 50.0, 3).size(), 5u);
  EXPECT_EQ(sample_mustlinks_within(truth, g, 100.0, 3).size(), 10u);
  EXPECT_TRUE(sample_mustlinks_within(truth, g, 0.0, 3).empty());
}

TEST(MustLinks, UniformMarginalsPassChiSquare) {
  // Every edge should be drawn with equal probability.
  testing::Rng rng(4);
  const auto g = testing::random_graph(rng, 8, 10);
  std::map<std::pair<int, int>, int> hits;
  const int trials = 1000;
  for (int seed = 0; seed < trials; ++seed) {
    const auto j = sample_mustlinks_uniform(g, 0.3, static_cast<std::uint64_t>(seed));
    for (const auto& pr : j.pairs()) ++hits[pr];
  }
  const double expected = trials * 3.0 / 10.0;
  double chi2 = 0.0;
  for (const Edge& e : g.edges()) {
    const double o = hits[{e.i, e.j}];
    chi2 += (o - expected) * (o - expected) / expected;
  }
  // Upper 1% point of chi-square with 9 degrees of freedom.
  EXPECT_LT(chi2, 21.666);
}

TEST(MustLinks, SamplesAreSeedDeterministic) {
  testing::Rng rng(5);
  const auto g = testing::random_graph(rng, 12, 30);
  EXPECT_EQ(sample_mustlinks_uniform(g, 0.4, 7).pairs(), sample_mustlinks_uniform(g, 0.4, 7).pairs());
}

TEST(Io, PointsRoundTripExactly) {
  TempDir dir;
  const auto ds = generate({Shape::SmileFaces, 30, 0.02, 8});
  save_points(dir.file("x.csv"), ds.points);
  const auto back = load_points(dir.file("x.csv"));
  EXPECT_TRUE(back.points.isApprox(ds.points.points, 0.0));
  EXPECT_EQ(back.points, ds.points.points);
}

TEST(Io, PointsShape) {
  TempDir dir;
  const auto x = load_points(dir.write("x.csv", "0,1\n2,3\n4,5\n"));
  EXPECT_EQ(x.n(), 3);
  EXPECT_EQ(x.dim(), 2);
}

TEST(Io, PointsHeaderAndComments) {
  TempDir dir;
  const auto p = dir.write("x.csv", "x,y\n# note\n1,2\n\n3.5,-4e-3\n");
  const auto x = load_points(p);
  ASSERT_EQ(x.n(), 2);
  EXPECT_EQ(x.points(1, 1), -4e-3);
}

TEST(Io, PointsParseErrorsCarryLineNumbers) {
  TempDir dir;
  EXPECT_EQ(parse_error_line([&] { load_points(dir.write("a.csv", "1,2\n3\n")); }), 2u);
  EXPECT_EQ(parse_error_line([&] { load_points(dir.write("b.csv", "1,2\n3,abc\n")); }), 2u);
  EXPECT_EQ(parse_error_line([&] { load_points(dir.write("c.csv", "1,2\n\n3,nan\n")); }), 3u);
  EXPECT_THROW(load_points(dir.write("d.csv", "")), ParseError);
  EXPECT_THROW(load_points(dir.file("missing.csv")), ParseError);
}

TEST(Io, EdgesRoundTrip) {
  TempDir dir;
  testing::Rng rng(6);
  const auto g = testing::random_graph(rng, 9, 15);
  save_edges(dir.file("e.tsv"), g);
  const auto back = load_edges(dir.file("e.tsv"), 9);
  ASSERT_EQ(back.num_edges(), g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    EXPECT_EQ(back.edge(e).i, g.edge(e).i);
    EXPECT_EQ(back.edge(e).j, g.edge(e).j);
    EXPECT_EQ(back.edge(e).a, g.edge(e).a);
  }
}

TEST(Io, EdgeParseErrors) {
  TempDir dir;
  EXPECT_EQ(parse_error_line([&] { load_edges(dir.write("a", "0\t1\t0.5\n2\t1\t0.5\n")); }), 2u);
  EXPECT_EQ(parse_error_line([&] { load_edges(dir.write("b", "0\t1\t-1\n")); }), 1u);
  EXPECT_EQ(parse_error_line([&] { load_edges(dir.write("c", "0\t1\t1\n#\n0\t1\t2\n")); }), 3u);
  EXPECT_EQ(parse_error_line([&] { load_edges(dir.write("d", "0\t5\t1\n"), 4); }), 1u);
  EXPECT_EQ(parse_error_line([&] { load_edges(dir.write("e", "0\t1\n")); }), 1u);
  EXPECT_EQ(parse_error_line([&] { load_edges(dir.write("f", "0\t1\tinf\n")); }), 1u);
}

TEST(Io, MustLinksAndLabelsRoundTrip) {
  TempDir dir;
  const MustLinkSet j({{0, 3}, {2, 5}, {1, 4}});
  save_mustlinks(dir.file("j.tsv"), j);
  EXPECT_EQ(load_mustlinks(dir.file("j.tsv"), 6).pairs(), j.pairs());
  EXPECT_EQ(parse_error_line([&] { load_mustlinks(dir.write("bad", "0\t3\n4\t4\n")); }), 2u);
  EXPECT_EQ(parse_error_line([&] { load_mustlinks(dir.write("far", "0\t9\n"), 6); }), 1u);

  const std::vector<int> labels = {2, 0, 0, 7, -1};
  save_labels(dir.file("l.csv"), labels);
  EXPECT_EQ(load_labels(dir.file("l.csv")), labels);
  EXPECT_EQ(parse_error_line([&] { load_labels(dir.write("lb", "1\n2.5\n")); }), 2u);
}

TEST(Io, ReportOmitsUnsetMetrics) {
  TempDir dir;
  EvalReport r;
  r.acc = 0.75;
  r.num_clusters = 3;
  r.iterations = 4;
  save_report(dir.file("r.json"), r);
  std::ifstream in(dir.file("r.json"));
  const auto j = nlohmann::json::parse(in);
  EXPECT_DOUBLE_EQ(j.at("acc").get<double>(), 0.75);
  EXPECT_FALSE(j.contains("nmi"));
  EXPECT_FALSE(j.contains("rmv"));
  EXPECT_EQ(j.at("num_clusters").get<int>(), 3);
}

}  // namespace
}  // namespace cossc
