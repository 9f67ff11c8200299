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

#include "cossc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "cossc/error.hpp"

namespace cossc {

namespace {

// Maps arbitrary labels to 0..k-1 in order of first appearance.
std::vector<int> compact(std::span<const int> labels, int& k) {
  std::map<int, int> ids;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = ids.try_emplace(labels[i], static_cast<int>(ids.size()));
    out[i] = it->second;
  }
  k = static_cast<int>(ids.size());
  return out;
}

void check_lengths(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) {
    throw ContractError("label vectors differ in length (" + std::to_string(pred.size()) +
                        " vs " + std::to_string(truth.size()) + ")");
  }
}

std::vector<std::vector<double>> contingency(const std::vector<int>& p, int kp,
                                             const std::vector<int>& t, int kt) {
  std::vector<std::vector<double>> c(static_cast<std::size_t>(kp),
                                     std::vector<double>(static_cast<std::size_t>(kt), 0.0));
  for (std::size_t i = 0; i < p.size(); ++i) c[p[i]][t[i]] += 1.0;
  return c;
}

}  // namespace

std::vector<int> solve_assignment(std::span<const double> cost, int k) {
  if (k < 0 || cost.size() != static_cast<std::size_t>(k) * static_cast<std::size_t>(k)) {
    throw ContractError("assignment cost must be k x k");
  }
  // Shortest augmenting path with row/column potentials, 1-based.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0);
  std::vector<int> match(k + 1, 0), way(k + 1, 0);
  auto at = [&](int r, int c) { return cost[static_cast<std::size_t>(r - 1) * k + (c - 1)]; };
  for (int row = 1; row <= k; ++row) {
    match[0] = row;
    int col0 = 0;
    std::vector<double> minv(k + 1, inf);
    std::vector<char> used(k + 1, 0);
    do {
      used[col0] = 1;
      const int r0 = match[col0];
      double delta = inf;
      int col1 = 0;
      for (int c = 1; c <= k; ++c) {
        if (used[c]) continue;
        const double cur = at(r0, c) - u[r0] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = col0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          col1 = c;
        }
      }
      for (int c = 0; c <= k; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const int col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> out(static_cast<std::size_t>(k), -1);
  for (int c = 1; c <= k; ++c) {
    if (match[c] > 0) out[match[c] - 1] = c - 1;
  }
  return out;
}

double accuracy(std::span<const int> pred, std::span<const int> truth) {
  check_lengths(pred, truth);
  if (pred.empty()) throw ContractError("accuracy needs at least one label");
  int kp = 0, kt = 0;
  const auto p = compact(pred, kp);
  const auto t = compact(truth, kt);
  const auto c = contingency(p, kp, t, kt);
  const int k = std::max(kp, kt);
  std::vector<double> cost(static_cast<std::size_t>(k) * k, 0.0);
  for (int r = 0; r < kp; ++r) {
    for (int s = 0; s < kt; ++s) cost[static_cast<std::size_t>(r) * k + s] = -c[r][s];
  }
  const auto assign = solve_assignment(cost, k);
  double matched = 0.0;
  for (int r = 0; r < kp; ++r) {
    if (assign[r] < kt) matched += c[r][assign[r]];
  }
  return matched / static_cast<double>(pred.size());
}

double nmi(std::span<const int> pred, std::span<const int> truth) {
  check_lengths(pred, truth);
  if (pred.empty()) throw ContractError("nmi needs at least one label");
  int kp = 0, kt = 0;
  const auto p = compact(pred, kp);
  const auto t = compact(truth, kt);
  const auto c = contingency(p, kp, t, kt);
  const double n = static_cast<double>(pred.size());

  std::vector<double> rp(static_cast<std::size_t>(kp), 0.0), rt(static_cast<std::size_t>(kt), 0.0);
  for (int r = 0; r < kp; ++r) {
    for (int s = 0; s < kt; ++s) {
      rp[r] += c[r][s];
      rt[s] += c[r][s];
    }
  }
  auto entropy = [n](const std::vector<double>& counts) {
    double h = 0.0;
    for (double x : counts) {
      if (x > 0.0) h -= (x / n) * std::log(x / n);
    }
    return h;
  };
  const double hp = entropy(rp);
  const double ht = entropy(rt);
  if (hp <= 0.0 || ht <= 0.0) return (hp <= 0.0 && ht <= 0.0) ? 1.0 : 0.0;

  double mi = 0.0;
  for (int r = 0; r < kp; ++r) {
    for (int s = 0; s < kt; ++s) {
      if (c[r][s] > 0.0) mi += (c[r][s] / n) * std::log(n * c[r][s] / (rp[r] * rt[s]));
    }
  }
  return std::clamp(mi / std::sqrt(hp * ht), 0.0, 1.0);
}

double rmv(const SimilarityGraph& g, const EdgeIndicator& z, const MustLinkSet& j) {
  if (z.size() != g.num_edges()) throw ContractError("indicator length does not match edges");
  if (j.empty()) return 0.0;
  std::size_t violated = 0;
  for (const auto& [a, b] : j.pairs()) {
    const auto e = b < g.n() ? g.find_edge(a, b) : std::nullopt;
    if (!e) {
      throw ContractError("must-link pair (" + std::to_string(a) + ", " + std::to_string(b) +
                          ") is not an edge; cannot evaluate");
    }
    if (z[*e] == 0.0) ++violated;
  }
  return static_cast<double>(violated) / static_cast<double>(j.size());
}

}  // namespace cossc
