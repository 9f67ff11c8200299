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

#include "cossc/baseline.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <random>

#include "cossc/error.hpp"
#include "cossc/linalg.hpp"

namespace cossc {

namespace {

using Rng = std::mt19937_64;

Eigen::MatrixXd plus_plus_seeds(const Eigen::MatrixXd& x, int k, Rng& rng) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd c(k, x.cols());
  c.row(0) = x.row(std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng));
  Eigen::VectorXd d2 = (x.rowwise() - c.row(0)).rowwise().squaredNorm();
  for (int m = 1; m < k; ++m) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double u = std::uniform_real_distribution<double>(0.0, total)(rng);
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        u -= d2[i];
        if (u < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng);
    }
    c.row(m) = x.row(pick);
    d2 = d2.cwiseMin((x.rowwise() - c.row(m)).rowwise().squaredNorm());
  }
  return c;
}

// Nearest centroid per row, ties to the lowest index. Returns the inertia.
double assign(const Eigen::MatrixXd& x, const Eigen::MatrixXd& c, std::vector<int>& labels,
              Eigen::VectorXd& dist2) {
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (Eigen::Index m = 0; m < c.rows(); ++m) {
      const double dd = (x.row(i) - c.row(m)).squaredNorm();
      if (dd < bd) {
        bd = dd;
        best = static_cast<int>(m);
      }
    }
    labels[i] = best;
    dist2[i] = bd;
    inertia += bd;
  }
  return inertia;
}

KMeansResult lloyd(const Eigen::MatrixXd& x, int k, const KMeansOptions& opts, Rng& rng) {
  KMeansResult r;
  r.centroids = plus_plus_seeds(x, k, rng);
  r.labels.assign(static_cast<std::size_t>(x.rows()), 0);
  Eigen::VectorXd dist2(x.rows());
  for (int it = 0;; ++it) {
    r.inertia = assign(x, r.centroids, r.labels, dist2);
    r.inertia_history.push_back(r.inertia);
    if (it == opts.max_iter) break;

    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, x.cols());
    std::vector<int> size(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      next.row(r.labels[i]) += x.row(i);
      ++size[r.labels[i]];
    }
    for (int m = 0; m < k; ++m) {
      if (size[m] > 0) {
        next.row(m) /= size[m];
        continue;
      }
      Eigen::Index far = 0;
      dist2.maxCoeff(&far);
      next.row(m) = x.row(far);
      dist2[far] = 0.0;
    }
    const double shift = (next - r.centroids).rowwise().norm().maxCoeff();
    r.centroids = std::move(next);
    if (shift <= opts.tol) {
      r.inertia = assign(x, r.centroids, r.labels, dist2);
      r.inertia_history.push_back(r.inertia);
      break;
    }
  }
  return r;
}

}  // namespace

SimilarityGraph sca_similarity(const SimilarityGraph& g, const MustLinkSet& j) {
  std::map<std::pair<int, int>, double> w;
  for (const Edge& e : g.edges()) w[{e.i, e.j}] = e.a;
  for (const auto& p : j.pairs()) {
    if (p.second >= g.n()) throw ContractError("must-link index out of range");
    w[p] = 1.0;
  }
  std::vector<std::pair<std::pair<int, int>, double>> flat(w.begin(), w.end());
  return SimilarityGraph::from_weights(g.n(), flat);
}

KMeansResult kmeans(const Eigen::MatrixXd& rows, int k, const KMeansOptions& opts) {
  if (k < 1 || k > rows.rows()) throw ContractError("kmeans needs 1 <= k <= number of rows");
  if (opts.restarts < 1 || opts.max_iter < 0 || !(opts.tol >= 0.0)) {
    throw ContractError("invalid kmeans options");
  }
  KMeansResult best;
  for (int r = 0; r < opts.restarts; ++r) {
    Rng rng(opts.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(r));
    KMeansResult cur = lloyd(rows, k, opts, rng);
    if (r == 0 || cur.inertia < best.inertia) {
      best = std::move(cur);
      best.best_restart = r;
    }
  }
  best.restarts_used = opts.restarts;
  return best;
}

ClusterAssignment spectral_cluster(const SimilarityGraph& g, int k, std::uint64_t seed,
                                   const KMeansOptions& opts) {
  if (k < 1 || k >= g.n()) throw ContractError("spectral clustering needs 1 <= k < n");
  const auto lap = g.laplacian();
  linalg::EigenOptions eo;
  eo.seed = seed;
  const double tol = std::max(1e-8 * std::max(1.0, lap.norm1()), linalg::residual_floor(lap));
  const auto spec = linalg::smallest_eigpairs(lap, k, tol, eo);

  KMeansOptions ko = opts;
  ko.seed = seed;
  const auto km = kmeans(spec.eigenvectors, k, ko);

  ClusterAssignment out;
  std::map<int, int> ids;
  out.labels.resize(km.labels.size());
  for (std::size_t i = 0; i < km.labels.size(); ++i) {
    out.labels[i] = ids.try_emplace(km.labels[i], static_cast<int>(ids.size())).first->second;
  }
  out.num_clusters = static_cast<int>(ids.size());
  out.surviving_edges.resize(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    out.surviving_edges[e] = out.labels[g.edge(e).i] == out.labels[g.edge(e).j];
  }
  return out;
}

}  // namespace cossc
