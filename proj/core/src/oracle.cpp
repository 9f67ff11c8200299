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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "cossc/error.hpp"

namespace cossc {

namespace {

void guard(const SimilarityGraph& g) {
  if (g.num_edges() > kOracleEdgeGuard) {
    throw GuardError("oracle enumeration refused: " + std::to_string(g.num_edges()) +
                         " edges exceed the guard of " + std::to_string(kOracleEdgeGuard),
                     kOracleEdgeGuard);
  }
}

// Dense L(A o Z) for small graphs, skipping the sparse assembly.
Eigen::MatrixXd dense_laplacian(const SimilarityGraph& g, std::span<const double> z) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(g.n(), g.n());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    const double w = ed.a * z[e];
    l(ed.i, ed.j) -= w;
    l(ed.j, ed.i) -= w;
    l(ed.i, ed.i) += w;
    l(ed.j, ed.j) += w;
  }
  return l;
}

Eigen::VectorXd spectrum(const Eigen::MatrixXd& l) {
  if (l.rows() == 0) return Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double rank_tol(const Eigen::MatrixXd& l) {
  return 1e-8 * std::max(1.0, l.rows() > 0 ? l.diagonal().maxCoeff() : 0.0);
}

double scaled_trace(const SimilarityGraph& g, std::span<const double> z) {
  double s = 0.0;
  for (std::size_t e = 0; e < g.num_edges(); ++e) s += g.edge(e).abar * z[e];
  return 2.0 * s;
}

std::vector<double> mask_values(std::uint32_t mask, std::size_t m) {
  std::vector<double> v(m);
  for (std::size_t e = 0; e < m; ++e) v[e] = (mask >> e) & 1U ? 1.0 : 0.0;
  return v;
}

bool applicable_d(const SimilarityGraph& g, int d) {
  return d >= base_component_count(g) && d < g.n();
}

}  // namespace

EdgeIndicator mask_to_indicator(std::uint32_t mask, std::size_t num_edges) {
  if (num_edges > 32) throw ContractError("bitmask covers at most 32 edges");
  return EdgeIndicator(mask_values(mask, num_edges));
}

double phi(const SimilarityGraph& g, const EdgeIndicator& z, double beta, int d) {
  if (z.size() != g.num_edges()) throw ContractError("indicator length does not match edges");
  if (d < 1 || d > g.n()) throw ContractError("phi needs 1 <= d <= n");
  const Eigen::VectorXd ev = spectrum(dense_laplacian(g, z.values()));
  return ev.head(d).sum() - beta * scaled_trace(g, z.values());
}

OracleResult brute_force_mip(const SimilarityGraph& g, double beta, int d) {
  guard(g);
  if (d < 1 || d > g.n()) throw ContractError("oracle needs 1 <= d <= n");
  const std::size_t m = g.num_edges();
  const std::uint32_t count = 1U << m;

  OracleResult r;
  r.phi_table.resize(count);
  r.rank_table.resize(count);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    const auto z = mask_values(mask, m);
    const Eigen::MatrixXd l = dense_laplacian(g, z);
    const Eigen::VectorXd ev = spectrum(l);
    r.phi_table[mask] = ev.head(d).sum() - beta * scaled_trace(g, z);
    r.rank_table[mask] = static_cast<int>((ev.array() > rank_tol(l)).count());
  }
  r.global_value = *std::min_element(r.phi_table.begin(), r.phi_table.end());
  r.tie_tol = 1e-9 * (1.0 + std::abs(r.global_value));
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    if (r.phi_table[mask] <= r.global_value + r.tie_tol) {
      r.minimizer_masks.push_back(mask);
      r.minimizers.push_back(mask_to_indicator(mask, m));
    }
  }
  return r;
}

BetaBar compute_beta_bar(const SimilarityGraph& g, double p) {
  guard(g);
  if (!(p >= 1.0)) throw ContractError("p must be >= 1");
  const std::size_t m = g.num_edges();
  if (m == 0) throw ContractError("beta_bar is undefined for a graph without edges");

  BetaBar b;
  b.lambda_plus_min = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1U << m); ++mask) {
    const Eigen::MatrixXd l = dense_laplacian(g, mask_values(mask, m));
    const Eigen::VectorXd ev = spectrum(l);
    const double tol = rank_tol(l);
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
      if (ev[k] > tol) {
        b.lambda_plus_min = std::min(b.lambda_plus_min, ev[k]);
        break;
      }
    }
  }
  double min_j = std::numeric_limits<double>::infinity();
  for (const Edge& e : g.edges()) {
    b.weight_sum += 2.0 * e.a;
    if (e.mustlink) min_j = std::min(min_j, e.a);
  }
  b.empty_mustlinks = !std::isfinite(min_j);
  const double n = g.n();
  b.alpha = b.empty_mustlinks ? p : p * std::max(1.0, b.weight_sum / (n * n * min_j));
  b.value = b.lambda_plus_min / (b.alpha * b.weight_sum);
  return b;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::NotApplicable:
      return "not_applicable";
  }
  return "unknown";
}

int base_component_count(const SimilarityGraph& g) { return connected_components(g).count; }

Verdict check_trichotomy(const SimilarityGraph& g, const OracleResult& r, int d) {
  if (d < base_component_count(g)) return Verdict::NotApplicable;
  for (std::size_t k = 0; k < r.minimizer_masks.size(); ++k) {
    const int rank = r.rank_table[r.minimizer_masks[k]];
    const bool above = rank > g.n() - d;
    const bool exact = rank == g.n() - d && r.minimizers[k].is_binary();
    if (above == exact) return Verdict::Fail;
  }
  return Verdict::Pass;
}

Verdict check_large_beta(const SimilarityGraph& g, const OracleResult& r, double beta, int d) {
  if (!(beta > 1.0) || !applicable_d(g, d)) return Verdict::NotApplicable;
  const std::uint32_t all = (1U << g.num_edges()) - 1U;
  return r.minimizer_masks.size() == 1 && r.minimizer_masks[0] == all ? Verdict::Pass
                                                                      : Verdict::Fail;
}

Verdict check_small_beta(const SimilarityGraph& g, const OracleResult& r, double beta, int d,
                         const BetaBar& bar) {
  if (!(beta < bar.value) || !applicable_d(g, d)) return Verdict::NotApplicable;
  for (std::uint32_t mask : r.minimizer_masks) {
    if (r.rank_table[mask] != g.n() - d) return Verdict::Fail;
  }
  return Verdict::Pass;
}

Verdict verify_mustlink_theorem(const SimilarityGraph& g, const MustLinkSet& j, double beta,
                                double p, const EdgeIndicator& z, const Embedding& h,
                                double eps_gap) {
  if (z.size() != g.num_edges()) throw ContractError("indicator length does not match edges");
  if (!z.is_binary()) throw ContractError("must-link check needs a binary indicator");
  if (h.n() != g.n()) throw ContractError("embedding row count does not match the graph");
  if (j.empty()) return Verdict::Pass;

  std::vector<std::size_t> ids;
  double min_a = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : j.pairs()) {
    const auto e = b < g.n() ? g.find_edge(a, b) : std::nullopt;
    if (!e) {
      throw ContractError("must-link pair (" + std::to_string(a) + ", " + std::to_string(b) +
                          ") is not an edge");
    }
    ids.push_back(*e);
    min_a = std::min(min_a, g.edge(*e).a);
  }
  if (!(beta * p > 2.0) || !(eps_gap >= 0.0 && eps_gap < 2.0 * min_a)) {
    return Verdict::NotApplicable;
  }
  const auto grad = grad_z(g, h, beta);
  double gap = 0.0;
  for (std::size_t e = 0; e < z.size(); ++e) gap += grad[e] * z[e] - std::min(grad[e], 0.0);
  if (gap > eps_gap) return Verdict::NotApplicable;

  for (std::size_t e : ids) {
    if (z[e] != 1.0) return Verdict::Fail;
  }
  return Verdict::Pass;
}

double relaxation_margin(const SimilarityGraph& g, const OracleResult& r, double beta, int d,
                         int samples, std::uint64_t seed) {
  if (samples < 1) throw ContractError("need at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double margin = std::numeric_limits<double>::infinity();
  std::vector<double> z(g.num_edges());
  for (int s = 0; s < samples; ++s) {
    for (double& v : z) v = unit(rng);
    margin = std::min(margin, phi(g, EdgeIndicator(z), beta, d) - r.global_value);
  }
  return margin;
}

}  // namespace cossc
