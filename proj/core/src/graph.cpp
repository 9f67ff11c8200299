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

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "cossc/error.hpp"

namespace cossc {

namespace {

std::string pair_str(int i, int j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

bool edge_less(const Edge& x, const Edge& y) {
  return x.i != y.i ? x.i < y.i : x.j < y.j;
}

linalg::SymMatrix weighted(const SimilarityGraph& g, std::span<const double> mask, bool scaled) {
  if (!mask.empty() && mask.size() != g.num_edges()) {
    throw ContractError("edge mask length " + std::to_string(mask.size()) +
                        " does not match edge count " + std::to_string(g.num_edges()));
  }
  std::vector<linalg::Triplet> t;
  t.reserve(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto& ed = g.edges()[e];
    const double z = mask.empty() ? 1.0 : mask[e];
    const double v = (scaled ? ed.abar : ed.a) * z;
    if (v != 0.0) t.push_back({ed.i, ed.j, v});
  }
  return linalg::SymMatrix::from_upper_triplets(g.n(), t);
}

}  // namespace

void validate(const PointCloud& x) {
  if (x.n() < 2) throw ContractError("point cloud needs at least 2 points");
  if (x.dim() < 1) throw ContractError("point cloud has zero dimensions");
  if (!x.points.allFinite()) throw ContractError("point cloud has non-finite coordinates");
}

SimilarityGraph::SimilarityGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 0) throw ContractError("negative vertex count");
  for (const auto& e : edges_) {
    if (e.i < 0 || e.j >= n || e.i >= e.j) {
      throw ContractError("edge " + pair_str(e.i, e.j) + " is not canonical i < j within n = " +
                          std::to_string(n));
    }
    if (!std::isfinite(e.a) || !std::isfinite(e.abar) || !(e.a > 0.0)) {
      throw ContractError("edge " + pair_str(e.i, e.j) + " needs a finite positive weight");
    }
    if (e.abar < e.a) {
      throw ContractError("edge " + pair_str(e.i, e.j) + " has scaled weight below its weight");
    }
  }
  std::sort(edges_.begin(), edges_.end(), edge_less);
  for (std::size_t e = 1; e < edges_.size(); ++e) {
    if (edges_[e].i == edges_[e - 1].i && edges_[e].j == edges_[e - 1].j) {
      throw ContractError("duplicate edge " + pair_str(edges_[e].i, edges_[e].j));
    }
  }
}

SimilarityGraph SimilarityGraph::from_weights(
    int n, std::span<const std::pair<std::pair<int, int>, double>> w) {
  std::vector<Edge> edges;
  edges.reserve(w.size());
  for (const auto& [ij, weight] : w) {
    const auto [i, j] = std::minmax(ij.first, ij.second);
    edges.push_back({i, j, weight, weight, false});
  }
  return SimilarityGraph(n, std::move(edges));
}

std::optional<std::size_t> SimilarityGraph::find_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  const Edge key{i, j, 0.0, 0.0, false};
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), key, edge_less);
  if (it == edges_.end() || it->i != i || it->j != j) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

std::size_t SimilarityGraph::num_mustlinks() const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.mustlink; }));
}

double SimilarityGraph::mean_weight() const {
  if (edges_.empty()) return 0.0;
  double s = 0.0;
  for (const auto& e : edges_) s += e.a;
  return s / static_cast<double>(edges_.size());
}

linalg::SymMatrix SimilarityGraph::adjacency(std::span<const double> mask) const {
  return weighted(*this, mask, false);
}

linalg::SymMatrix SimilarityGraph::scaled_adjacency(std::span<const double> mask) const {
  return weighted(*this, mask, true);
}

linalg::SymMatrix SimilarityGraph::laplacian(std::span<const double> mask) const {
  return linalg::laplacian(adjacency(mask));
}

MustLinkSet::MustLinkSet(std::vector<std::pair<int, int>> pairs) : pairs_(std::move(pairs)) {
  for (auto& [i, j] : pairs_) {
    if (i == j) throw ContractError("must-link pair " + pair_str(i, j) + " joins a point to itself");
    if (i < 0 || j < 0) throw ContractError("must-link pair " + pair_str(i, j) + " has a negative index");
    if (i > j) std::swap(i, j);
  }
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

int auto_knn(int n) {
  if (n < 1) return 1;
  return std::max(1, static_cast<int>(std::ceil(std::log(static_cast<double>(n)))));
}

SimilarityGraph build_knn_similarity(const PointCloud& x, const KnnGraphOptions& opts) {
  validate(x);
  const int n = x.n();
  if (opts.k_n && *opts.k_n < 1) throw ContractError("k_n must be at least 1");
  if (opts.sigma_index < 1) throw ContractError("sigma_index must be at least 1");
  const int k = std::min(opts.k_n.value_or(auto_knn(n)), n - 1);
  const int s = std::min(opts.sigma_index, n - 1);

  std::vector<std::vector<int>> neighbors(static_cast<std::size_t>(n));
  std::vector<double> sigma(static_cast<std::size_t>(n));
  std::vector<double> row(static_cast<std::size_t>(n));
  std::vector<double> sorted;
  sorted.reserve(static_cast<std::size_t>(n));

  auto sqdist = [&x](int i, int j) {
    return (x.points.row(i) - x.points.row(j)).squaredNorm();
  };

  for (int i = 0; i < n; ++i) {
    sorted.clear();
    for (int j = 0; j < n; ++j) {
      row[j] = j == i ? 0.0 : sqdist(i, j);
      if (j != i) sorted.push_back(row[j]);
    }
    std::sort(sorted.begin(), sorted.end());
    const double kth = sorted[static_cast<std::size_t>(k - 1)];
    sigma[i] = std::max(std::sqrt(sorted[static_cast<std::size_t>(s - 1)]), 1e-12);
    auto& nb = neighbors[i];
    for (int j = 0; j < n; ++j) {
      if (j != i && row[j] <= kth) nb.push_back(j);
    }
  }

  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j : neighbors[i]) {
      if (j <= i) continue;
      if (!std::binary_search(neighbors[j].begin(), neighbors[j].end(), i)) continue;
      double w = std::exp(-sqdist(i, j) / (sigma[i] * sigma[j]));
      w = std::max(w, std::numeric_limits<double>::min());
      edges.push_back({i, j, w, w, false});
    }
  }
  return row_normalize_symmetrize(SimilarityGraph(n, std::move(edges)));
}

SimilarityGraph row_normalize_symmetrize(const SimilarityGraph& raw) {
  std::vector<double> degree(static_cast<std::size_t>(raw.n()), 0.0);
  for (const auto& e : raw.edges()) {
    degree[e.i] += e.a;
    degree[e.j] += e.a;
  }
  std::vector<Edge> out;
  out.reserve(raw.num_edges());
  for (const auto& e : raw.edges()) {
    const double from_i = degree[e.i] > 0.0 ? e.a / degree[e.i] : e.a;
    const double from_j = degree[e.j] > 0.0 ? e.a / degree[e.j] : e.a;
    const double a = 0.5 * (from_i + from_j);
    out.push_back({e.i, e.j, a, a, false});
  }
  return SimilarityGraph(raw.n(), std::move(out));
}

MustLinkValidation validate_mustlinks(const SimilarityGraph& g, const MustLinkSet& j) {
  MustLinkValidation v;
  for (const auto& [a, b] : j.pairs()) {
    if (b >= g.n() || !g.find_edge(a, b)) v.missing.emplace_back(a, b);
  }
  v.ok = v.missing.empty();
  return v;
}

SimilarityGraph inject_missing_edges(const SimilarityGraph& g, const MustLinkSet& j) {
  const double w = g.num_edges() > 0 ? g.mean_weight() : 1.0;
  std::vector<Edge> edges = g.edges();
  for (const auto& [a, b] : j.pairs()) {
    if (b >= g.n()) {
      throw ContractError("must-link pair " + pair_str(a, b) + " out of range for n = " +
                          std::to_string(g.n()));
    }
    if (!g.find_edge(a, b)) edges.push_back({a, b, w, w, false});
  }
  return SimilarityGraph(g.n(), std::move(edges));
}

SimilarityGraph scale_must_links(const SimilarityGraph& g, const MustLinkSet& j, double p,
                                 bool inject_missing) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ContractError("must-link scale p must be >= 1");
  const auto check = validate_mustlinks(g, j);
  SimilarityGraph base = g;
  if (!check.ok) {
    if (!inject_missing) {
      throw InfeasibleConstraintError(
          std::to_string(check.missing.size()) + " must-link pair(s) are not edges of the graph",
          check.missing);
    }
    base = inject_missing_edges(g, j);
  }
  std::vector<Edge> edges = base.edges();
  for (auto& e : edges) {
    e.abar = e.a;
    e.mustlink = false;
  }
  for (const auto& [a, b] : j.pairs()) {
    auto& e = edges[*base.find_edge(a, b)];
    e.abar = p * e.a;
    e.mustlink = true;
  }
  return SimilarityGraph(base.n(), std::move(edges));
}

Components connected_components(int n, std::span<const std::pair<int, int>> edges) {
  if (n < 0) throw ContractError("negative vertex count");
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw ContractError("edge " + pair_str(i, j) + " out of range for n = " + std::to_string(n));
    }
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  Components c;
  c.labels.assign(static_cast<std::size_t>(n), -1);
  std::deque<int> queue;
  for (int root = 0; root < n; ++root) {
    if (c.labels[root] >= 0) continue;
    c.labels[root] = c.count;
    queue.push_back(root);
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int w : adj[v]) {
        if (c.labels[w] < 0) {
          c.labels[w] = c.count;
          queue.push_back(w);
        }
      }
    }
    ++c.count;
  }
  return c;
}

Components connected_components(const SimilarityGraph& g, std::span<const double> mask) {
  if (!mask.empty() && mask.size() != g.num_edges()) {
    throw ContractError("edge mask length does not match edge count");
  }
  std::vector<std::pair<int, int>> active;
  active.reserve(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (mask.empty() || mask[e] != 0.0) active.emplace_back(g.edges()[e].i, g.edges()[e].j);
  }
  return connected_components(g.n(), active);
}

}  // namespace cossc
