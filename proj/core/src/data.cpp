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

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "cossc/error.hpp"
#include "json.hpp"

namespace cossc {

namespace {

using Point = Eigen::Vector2d;
using Rng = std::mt19937_64;

constexpr double kPi = std::numbers::pi;

struct Rect {
  double x0, y0, x1, y1;
  bool contains(const Point& p) const { return p.x() >= x0 && p.x() <= x1 && p.y() >= y0 && p.y() <= y1; }
  double area() const { return (x1 - x0) * (y1 - y0); }
};

Rect centered_square(double cx, double cy, double side) {
  return {cx - side / 2, cy - side / 2, cx + side / 2, cy + side / 2};
}

double unit(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// `count` points at stratified positions t in [0, 1) along a curve that is
// parametrized proportionally to arc length.
void sample_curve(std::vector<Point>& out, int count, Rng& rng,
                  const std::function<Point(double)>& curve) {
  for (int k = 0; k < count; ++k) {
    const double jitter = 0.25 + 0.5 * unit(rng);
    out.push_back(curve((k + jitter) / count));
  }
}

// Jittered grid over `outer` minus `hole`, trimmed at random to `count`.
void sample_region(std::vector<Point>& out, int count, Rng& rng, const Rect& outer,
                   const std::optional<Rect>& hole = std::nullopt) {
  const double area = outer.area() - (hole ? hole->area() : 0.0);
  double h = std::sqrt(area / count);
  std::vector<Point> cells;
  for (;; h *= 0.98) {
    cells.clear();
    for (double y = outer.y0 + h / 2; y < outer.y1; y += h) {
      for (double x = outer.x0 + h / 2; x < outer.x1; x += h) {
        const Point c(x, y);
        if (!hole || !hole->contains(c)) cells.push_back(c);
      }
    }
    if (static_cast<int>(cells.size()) >= count) break;
  }
  std::vector<std::size_t> keep(cells.size());
  for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = i;
  std::shuffle(keep.begin(), keep.end(), rng);
  keep.resize(static_cast<std::size_t>(count));
  std::sort(keep.begin(), keep.end());
  for (std::size_t i : keep) {
    const Point jitter(unit(rng) - 0.5, unit(rng) - 0.5);
    out.push_back(cells[i] + 0.5 * h * jitter);
  }
}

Point on_circle(double cx, double cy, double r, double angle) {
  return {cx + r * std::cos(angle), cy + r * std::sin(angle)};
}

std::function<Point(double)> circle(double cx, double cy, double r) {
  return [=](double t) { return on_circle(cx, cy, r, 2 * kPi * t); };
}

std::function<Point(double)> arc(double cx, double cy, double r, double from, double to) {
  return [=](double t) { return on_circle(cx, cy, r, from + (to - from) * t); };
}

// Two rings of radius 0.75 at (-1.5, 1.5) and (1.5, 1.5) joined by a
// straight bridge.
Point glasses(double t) {
  const double r = 0.75;
  const double ring = 2 * kPi * r;
  const double bridge = 1.5;
  double s = t * (2 * ring + bridge);
  if (s < ring) return on_circle(-1.5, 1.5, r, s / r);
  s -= ring;
  if (s < bridge) return {-0.75 + s, 1.5};
  s -= bridge;
  return on_circle(1.5, 1.5, r, kPi + s / r);
}

// Each call appends one cluster of exactly n points.
std::vector<std::function<void(std::vector<Point>&, int, Rng&)>> builders(Shape s) {
  using B = std::function<void(std::vector<Point>&, int, Rng&)>;
  auto on = [](std::function<Point(double)> c) -> B {
    return [c](std::vector<Point>& out, int n, Rng& rng) { sample_curve(out, n, rng, c); };
  };
  auto in = [](Rect r, std::optional<Rect> hole = std::nullopt) -> B {
    return [r, hole](std::vector<Point>& out, int n, Rng& rng) { sample_region(out, n, rng, r, hole); };
  };
  switch (s) {
    case Shape::ThreeCircles:
      return {on(circle(0, 0, 1)), on(circle(0, 0, 2)), on(circle(0, 0, 3))};
    case Shape::SmileFaces:
      return {on(circle(0, 0, 4.5)), on(glasses),
              on(arc(0, 0.75, 2.7, 7 * kPi / 6, 11 * kPi / 6))};
    case Shape::ThreeParts:
      return {in({-3.5, -0.5, -1.5, 0.5}), in({-0.5, -1.0, 0.5, 1.0}), in({1.5, -0.75, 3.0, 0.75})};
    case Shape::TwoBlocksInCircle:
      return {on(circle(0, 0, 3)), in(centered_square(-1, 0, 1.2)), in(centered_square(1, 0, 1.2))};
    case Shape::TwoMoons:
      return {on([](double t) { return Point(2 * std::cos(kPi * t), 2 * std::sin(kPi * t)); }),
              on([](double t) { return Point(2 - 2 * std::cos(kPi * t), 1 - 2 * std::sin(kPi * t)); })};
    case Shape::FourBlocksNoise:
      return {in(centered_square(-1.2, 1.2, 1.2)), in(centered_square(1.2, 1.2, 1.2)),
              in(centered_square(-1.2, -1.2, 1.2)), in(centered_square(1.2, -1.2, 1.2)),
              in({-4.2, -4.2, 4.2, 4.2}, Rect{-2.8, -2.8, 2.8, 2.8})};
  }
  throw ContractError("unknown shape");
}

// ---- text I/O helpers ----

std::vector<std::string_view> split(std::string_view line, bool tabs) {
  std::vector<std::string_view> out;
  if (tabs) {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == '\t' || line[i] == ' ')) ++i;
      if (i == line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != '\t' && line[j] != ' ') ++j;
      out.push_back(line.substr(i, j - i));
      i = j;
    }
  } else {
    std::size_t i = 0;
    for (;;) {
      const std::size_t j = line.find(',', i);
      std::string_view tok = line.substr(i, j == std::string_view::npos ? j : j - i);
      while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
      while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t')) tok.remove_suffix(1);
      out.push_back(tok);
      if (j == std::string_view::npos) break;
      i = j + 1;
    }
  }
  return out;
}

std::optional<double> to_double(std::string_view tok) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) return std::nullopt;
  return v;
}

std::optional<long long> to_int(std::string_view tok) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) return std::nullopt;
  return v;
}

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

// Calls fn(line_number, line) for every non-blank, non-comment line.
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::size_t, std::string_view)>& fn) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    fn(number, line);
  }
}

int parse_index(std::string_view tok, const std::filesystem::path& path, std::size_t line) {
  const auto v = to_int(tok);
  if (!v) throw ParseError(where(path, line) + "expected an index, got '" + std::string(tok) + "'", line);
  if (*v < 0 || *v > std::numeric_limits<int>::max()) {
    throw ParseError(where(path, line) + "index " + std::string(tok) + " out of range", line);
  }
  return static_cast<int>(*v);
}

void check_range(int idx, std::optional<int> n, const std::filesystem::path& path, std::size_t line) {
  if (n && idx >= *n) {
    throw ParseError(where(path, line) + "index " + std::to_string(idx) + " out of range (n = " +
                         std::to_string(*n) + ")",
                     line);
  }
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

std::string_view to_string(Shape s) {
  switch (s) {
    case Shape::ThreeCircles:
      return "three-circles";
    case Shape::SmileFaces:
      return "smile-faces";
    case Shape::ThreeParts:
      return "three-parts";
    case Shape::TwoBlocksInCircle:
      return "two-blocks-in-circle";
    case Shape::TwoMoons:
      return "two-moons";
    case Shape::FourBlocksNoise:
      return "four-blocks-noise";
  }
  return "unknown";
}

std::optional<Shape> parse_shape(std::string_view token) {
  for (Shape s : kAllShapes) {
    if (to_string(s) == token) return s;
  }
  return std::nullopt;
}

int ideal_clusters(Shape s) { return static_cast<int>(builders(s).size()); }

Dataset generate(const SyntheticSpec& spec) {
  if (spec.n_per_cluster < 20) throw ContractError("n_per_cluster must be at least 20");
  if (!(spec.noise >= 0.0) || !std::isfinite(spec.noise)) throw ContractError("noise must be >= 0");
  Rng rng(spec.seed);
  std::vector<Point> pts;
  Dataset d;
  const auto parts = builders(spec.shape);
  for (std::size_t c = 0; c < parts.size(); ++c) {
    parts[c](pts, spec.n_per_cluster, rng);
    d.truth.labels.resize(pts.size(), static_cast<int>(c));
  }
  // Uniform on [-sqrt(3), sqrt(3)] has unit variance.
  const double half = std::sqrt(3.0) * spec.noise;
  d.points.points.resize(static_cast<Eigen::Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Point p = pts[i];
    if (half > 0.0) p += half * Point(2 * unit(rng) - 1, 2 * unit(rng) - 1);
    d.points.points.row(static_cast<Eigen::Index>(i)) = p.transpose();
  }
  return d;
}

MustLinkSet sample_mustlinks_within(const GroundTruth& truth, const SimilarityGraph& g,
                                    double s_percent, std::uint64_t seed) {
  if (!(s_percent >= 0.0 && s_percent <= 100.0)) throw ContractError("s must lie in [0, 100]");
  if (truth.labels.size() != static_cast<std::size_t>(g.n())) {
    throw ContractError("truth labels do not match the graph size");
  }
  std::vector<std::pair<int, int>> candidates;
  for (const Edge& e : g.edges()) {
    if (truth.labels[e.i] == truth.labels[e.j]) candidates.emplace_back(e.i, e.j);
  }
  const auto take = static_cast<std::size_t>(std::floor(s_percent * candidates.size() / 100.0));
  Rng rng(seed);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  candidates.resize(take);
  return MustLinkSet(std::move(candidates));
}

MustLinkSet sample_mustlinks_uniform(const SimilarityGraph& g, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ContractError("fraction must lie in [0, 1]");
  std::vector<std::pair<int, int>> pairs;
  for (const Edge& e : g.edges()) pairs.emplace_back(e.i, e.j);
  const auto take = static_cast<std::size_t>(std::floor(fraction * pairs.size()));
  Rng rng(seed);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  pairs.resize(take);
  return MustLinkSet(std::move(pairs));
}

PointCloud load_points(const std::filesystem::path& path) {
  std::vector<std::vector<double>> rows;
  bool first = true;
  for_each_line(path, [&](std::size_t line, std::string_view text) {
    const auto toks = split(text, false);
    const bool header = first && !to_double(toks.front());
    first = false;
    if (header) return;
    std::vector<double> row;
    for (const auto tok : toks) {
      const auto v = to_double(tok);
      if (!v) throw ParseError(where(path, line) + "expected a number, got '" + std::string(tok) + "'", line);
      if (!std::isfinite(*v)) throw ParseError(where(path, line) + "non-finite coordinate", line);
      row.push_back(*v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(where(path, line) + "expected " + std::to_string(rows.front().size()) +
                           " columns, got " + std::to_string(row.size()),
                       line);
    }
    rows.push_back(std::move(row));
  });
  if (rows.empty()) throw ParseError(path.string() + ": no points", 0);
  PointCloud x;
  x.points.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < rows[i].size(); ++c) {
      x.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
    }
  }
  return x;
}

SimilarityGraph load_edges(const std::filesystem::path& path, std::optional<int> n) {
  std::vector<std::pair<std::pair<int, int>, double>> w;
  std::vector<std::size_t> lines;
  int max_index = -1;
  for_each_line(path, [&](std::size_t line, std::string_view text) {
    const auto toks = split(text, true);
    if (toks.size() != 3) throw ParseError(where(path, line) + "expected 'i<TAB>j<TAB>weight'", line);
    const int i = parse_index(toks[0], path, line);
    const int j = parse_index(toks[1], path, line);
    if (i >= j) throw ParseError(where(path, line) + "edge needs i < j", line);
    check_range(j, n, path, line);
    const auto v = to_double(toks[2]);
    if (!v || !std::isfinite(*v) || !(*v > 0.0)) {
      throw ParseError(where(path, line) + "weight must be a positive finite number", line);
    }
    w.push_back({{i, j}, *v});
    lines.push_back(line);
    max_index = std::max(max_index, j);
  });
  std::vector<std::size_t> order(w.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a].first < w[b].first; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (w[order[k]].first == w[order[k - 1]].first) {
      const std::size_t line = lines[order[k]];
      throw ParseError(where(path, line) + "duplicate edge", line);
    }
  }
  return SimilarityGraph::from_weights(n.value_or(max_index + 1), w);
}

MustLinkSet load_mustlinks(const std::filesystem::path& path, std::optional<int> n) {
  std::vector<std::pair<int, int>> pairs;
  for_each_line(path, [&](std::size_t line, std::string_view text) {
    const auto toks = split(text, true);
    if (toks.size() != 2) throw ParseError(where(path, line) + "expected 'i<TAB>j'", line);
    const int i = parse_index(toks[0], path, line);
    const int j = parse_index(toks[1], path, line);
    if (i == j) throw ParseError(where(path, line) + "must-link pair needs i != j", line);
    check_range(std::max(i, j), n, path, line);
    pairs.emplace_back(i, j);
  });
  return MustLinkSet(std::move(pairs));
}

std::vector<int> load_labels(const std::filesystem::path& path) {
  std::vector<int> labels;
  for_each_line(path, [&](std::size_t line, std::string_view text) {
    const auto toks = split(text, false);
    const auto v = toks.size() == 1 ? to_int(toks[0]) : std::nullopt;
    if (!v || *v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max()) {
      throw ParseError(where(path, line) + "expected one integer label", line);
    }
    labels.push_back(static_cast<int>(*v));
  });
  return labels;
}

void save_points(const std::filesystem::path& path, const PointCloud& x) {
  auto out = open_out(path);
  for (int i = 0; i < x.n(); ++i) {
    for (int c = 0; c < x.dim(); ++c) {
      if (c) out << ',';
      out << format_double(x.points(i, c));
    }
    out << '\n';
  }
  close_out(out, path);
}

void save_edges(const std::filesystem::path& path, const SimilarityGraph& g) {
  auto out = open_out(path);
  for (const Edge& e : g.edges()) out << e.i << '\t' << e.j << '\t' << format_double(e.a) << '\n';
  close_out(out, path);
}

void save_mustlinks(const std::filesystem::path& path, const MustLinkSet& j) {
  auto out = open_out(path);
  for (const auto& [a, b] : j.pairs()) out << a << '\t' << b << '\n';
  close_out(out, path);
}

void save_labels(const std::filesystem::path& path, std::span<const int> labels) {
  auto out = open_out(path);
  for (int l : labels) out << l << '\n';
  close_out(out, path);
}

void save_labels(const std::filesystem::path& path, const ClusterAssignment& c) {
  save_labels(path, std::span<const int>(c.labels));
}

void save_report(const std::filesystem::path& path, const EvalReport& r) {
  nlohmann::ordered_json j;
  if (r.acc) j["acc"] = *r.acc;
  if (r.nmi) j["nmi"] = *r.nmi;
  if (r.rmv) j["rmv"] = *r.rmv;
  j["num_clusters"] = r.num_clusters;
  j["iterations"] = r.iterations;
  j["f_final"] = r.f_final;
  j["time_ms"] = r.time_ms;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  close_out(out, path);
}

}  // namespace cossc
