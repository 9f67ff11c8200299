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

#include "cossc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cossc {

double SolverConfig::resolved_beta(int n) const {
  if (beta) return *beta;
  return n > 0 ? static_cast<double>(d - 1) / static_cast<double>(n) : 0.0;
}

void SolverConfig::validate(int n) const {
  if (d < 1 || d >= n) {
    throw ContractError("need 1 <= d < n (d = " + std::to_string(d) + ", n = " +
                        std::to_string(n) + ")");
  }
  const double b = resolved_beta(n);
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw ContractError(beta ? "beta must be positive"
                             : "automatic beta (d - 1) / n is zero for d = 1; pass beta explicitly");
  }
  if (!(p >= 1.0) || !std::isfinite(p)) throw ContractError("p must be >= 1");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ContractError("eps must be nonnegative");
  if (max_iter < 1) throw ContractError("max_iter must be at least 1");
  if (zero_threshold && !(*zero_threshold >= 0.0)) throw ContractError("zero_threshold must be >= 0");
  if (dense_cutoff < 0) throw ContractError("dense_cutoff must be >= 0");
  if (rank_tol && !(*rank_tol > 0.0)) throw ContractError("rank_tol must be positive");
}

linalg::EigenOptions SolverConfig::eigen_options(std::uint64_t stream) const {
  linalg::EigenOptions o;
  o.dense_cutoff = dense_cutoff;
  o.seed = seed + 0x9e3779b97f4a7c15ULL * stream;
  return o;
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::EpsDecrease:
      return "eps_decrease";
    case Termination::IterCap:
      return "iter_cap";
  }
  return "unknown";
}

Embedding default_h0(const SimilarityGraph& g, const SolverConfig& config) {
  if (config.d < 1 || config.d >= g.n()) throw ContractError("need 1 <= d < n");
  return h_step(g, EdgeIndicator::ones(g.num_edges()), config.d, config.eps,
                config.eigen_options(0))
      .h;
}

SolveResult cossc_solve(const SimilarityGraph& g, const SolverConfig& config,
                        std::optional<Embedding> h0, const IterateObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  config.validate(g.n());
  const double beta = config.resolved_beta(g.n());
  const double threshold = config.zero_threshold.value_or(default_zero_threshold(g, beta));

  if (h0 && (h0->n() != g.n() || h0->d() != config.d)) {
    throw ContractError("initial embedding must be n x d");
  }
  Embedding h = h0 ? std::move(*h0) : default_h0(g, config);
  EdgeIndicator z = EdgeIndicator::ones(g.num_edges());

  SolverTrace trace;
  trace.f_history.push_back(objective(g, z, h, beta));
  if (observer) observer(0, z);

  auto stamp = [&] { trace.wall_time = std::chrono::steady_clock::now() - start; };

  for (int t = 0;; ++t) {
    if (t == config.max_iter) {
      trace.termination = Termination::IterCap;
      break;
    }
    const auto grad = grad_z(g, h, beta);
    EdgeIndicator next = z_step(z, grad, threshold);
    ++trace.iterations;
    if (observer) observer(t + 1, next);

    // f is linear in Z, so the decrease is exactly sum_e G_e (z_e - z'_e).
    double decrease = 0.0;
    int flips = 0;
    for (std::size_t e = 0; e < z.size(); ++e) {
      if (z[e] != next[e]) {
        decrease += grad[e] * (z[e] - next[e]);
        ++flips;
      }
    }
    trace.z_changes.push_back(flips);
    if (decrease <= config.eps) {
      trace.termination = Termination::EpsDecrease;
      break;
    }

    HStepResult hs;
    try {
      hs = h_step(g, next, config.d, config.eps, config.eigen_options(static_cast<std::uint64_t>(t) + 1));
    } catch (const SolverError& err) {
      stamp();
      throw SolveFailure(err, trace);
    }
    const double f_keep = objective(g, next, h, beta);
    const double f_new = objective(g, next, hs.h, beta);
    z = std::move(next);
    if (f_new <= f_keep) {
      h = std::move(hs.h);
      trace.f_history.push_back(f_new);
    } else {
      ++trace.h_rejections;
      trace.f_history.push_back(f_keep);
    }
  }
  stamp();
  return SolveResult{std::move(z), std::move(h), std::move(trace), beta};
}

BlockwiseReport check_blockwise(const SimilarityGraph& g, const EdgeIndicator& z,
                                const Embedding& h, double beta, double eps) {
  if (z.size() != g.num_edges()) throw ContractError("indicator length does not match edges");
  if (h.n() != g.n() || h.d() < 1 || h.d() >= g.n()) throw ContractError("embedding must be n x d, 1 <= d < n");
  const auto grad = grad_z(g, h, beta);
  BlockwiseReport r;
  for (std::size_t e = 0; e < z.size(); ++e) {
    r.z_gap += grad[e] * z[e] - std::min(grad[e], 0.0);
  }
  const Eigen::VectorXd ev = linalg::all_eigenvalues(g.laplacian(z.values()));
  r.h_gap = trace_term(g, z, h) - ev.head(h.d()).sum();
  const double slack = 1e-12 * (1.0 + std::abs(objective(g, z, h, beta)));
  r.pass = r.z_gap <= eps + slack && r.h_gap <= eps + slack;
  return r;
}

}  // namespace cossc
