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

#include "cossc/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cossc/error.hpp"

namespace cossc {

namespace {

void check_sizes(const SimilarityGraph& g, const EdgeIndicator& z, const Embedding& h) {
  if (z.size() != g.num_edges()) {
    throw ContractError("indicator has " + std::to_string(z.size()) + " entries for " +
                        std::to_string(g.num_edges()) + " edges");
  }
  if (h.n() != g.n()) {
    throw ContractError("embedding has " + std::to_string(h.n()) + " rows for " +
                        std::to_string(g.n()) + " vertices");
  }
}

}  // namespace

EdgeIndicator::EdgeIndicator(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw ContractError("edge indicator value outside [0, 1]");
  }
}

bool EdgeIndicator::is_binary() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

std::size_t EdgeIndicator::count_kept() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](double v) { return v != 0.0; }));
}

EdgeIndicator EdgeIndicator::ceil() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](double v) { return std::ceil(v); });
  return EdgeIndicator(std::move(out));
}

Embedding::Embedding(Eigen::MatrixXd h) : h_(std::move(h)) {
  const double err = linalg::orthonormality_error(h_);
  if (!(err <= kOrthoTol)) {
    throw ContractError("embedding columns are not orthonormal (error " + std::to_string(err) + ")");
  }
}

bool check_model_params(const SimilarityGraph& g, const ModelParams& params) {
  if (!(params.beta > 0.0) || !std::isfinite(params.beta)) throw ContractError("beta must be positive");
  if (!(params.p >= 1.0) || !std::isfinite(params.p)) throw ContractError("p must be >= 1");
  if (params.d < 1 || params.d >= g.n()) throw ContractError("need 1 <= d < n");
  return params.d >= connected_components(g).count;
}

double edge_spread(const Embedding& h, int i, int j) {
  return (h.matrix().row(i) - h.matrix().row(j)).squaredNorm();
}

double trace_term(const SimilarityGraph& g, const EdgeIndicator& z, const Embedding& h) {
  check_sizes(g, z, h);
  double t = 0.0;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (z[e] == 0.0) continue;
    const auto& ed = g.edges()[e];
    t += z[e] * ed.a * edge_spread(h, ed.i, ed.j);
  }
  return t;
}

double objective(const SimilarityGraph& g, const EdgeIndicator& z, const Embedding& h,
                 double beta) {
  check_sizes(g, z, h);
  double spread = 0.0;
  double kept = 0.0;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (z[e] == 0.0) continue;
    const auto& ed = g.edges()[e];
    spread += z[e] * ed.a * edge_spread(h, ed.i, ed.j);
    kept += z[e] * ed.abar;
  }
  return spread - beta * 2.0 * kept;
}

std::vector<double> grad_z(const SimilarityGraph& g, const Embedding& h, double beta) {
  if (h.n() != g.n()) throw ContractError("embedding rows do not match vertex count");
  std::vector<double> out(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto& ed = g.edges()[e];
    out[e] = ed.a * edge_spread(h, ed.i, ed.j) - 2.0 * beta * ed.abar;
  }
  return out;
}

double default_zero_threshold(const SimilarityGraph& g, double beta) {
  double max_abar = 0.0;
  for (const auto& e : g.edges()) max_abar = std::max(max_abar, e.abar);
  return 1e-12 * (1.0 + beta * max_abar);
}

EdgeIndicator z_step(const EdgeIndicator& z, std::span<const double> grad, double zero_threshold) {
  if (grad.size() != z.size()) throw ContractError("gradient length does not match indicator");
  if (!z.is_binary()) throw ContractError("z_step expects a binary indicator");
  std::vector<double> out(z.size());
  for (std::size_t e = 0; e < z.size(); ++e) {
    if (grad[e] > zero_threshold) {
      out[e] = 0.0;
    } else if (grad[e] < -zero_threshold) {
      out[e] = 1.0;
    } else {
      out[e] = z[e];
    }
  }
  return EdgeIndicator(std::move(out));
}

HStepResult h_step(const SimilarityGraph& g, const EdgeIndicator& z, int d, double eps,
                   const linalg::EigenOptions& opts) {
  if (z.size() != g.num_edges()) throw ContractError("indicator length does not match edges");
  if (!z.is_binary()) throw ContractError("h_step expects a binary indicator");
  if (!(eps >= 0.0)) throw ContractError("eps must be nonnegative");
  const auto lap = g.laplacian(z.values());
  const double tol = eps / (2.0 * d * std::max(1.0, lap.norm1()));
  auto spec = linalg::smallest_eigpairs(lap, d, tol, opts);
  HStepResult out{Embedding(std::move(spec.eigenvectors)), 0.0, spec.eigenvalues.sum(),
                  spec.residual_norm, std::max(tol, linalg::residual_floor(lap))};
  out.trace = trace_term(g, z, out.h);
  return out;
}

}  // namespace cossc
