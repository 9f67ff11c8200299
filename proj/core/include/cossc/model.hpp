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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cossc/graph.hpp"
#include "cossc/linalg.hpp"

namespace cossc {

/// Per-edge keep indicator Z aligned with SimilarityGraph::edges(). Values lie
/// in [0, 1]; solver iterates are always binary.
class EdgeIndicator {
 public:
  EdgeIndicator() = default;
  /// Throws ContractError if any value falls outside [0, 1].
  explicit EdgeIndicator(std::vector<double> values);

  static EdgeIndicator ones(std::size_t m) { return EdgeIndicator(std::vector<double>(m, 1.0)); }
  static EdgeIndicator zeros(std::size_t m) { return EdgeIndicator(std::vector<double>(m, 0.0)); }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t e) const { return values_[e]; }
  std::span<const double> values() const noexcept { return values_; }
  bool is_binary() const;
  std::size_t count_kept() const;
  /// Entrywise ceiling.
  EdgeIndicator ceil() const;

  friend bool operator==(const EdgeIndicator&, const EdgeIndicator&) = default;

 private:
  std::vector<double> values_;
};

/// n x d matrix with orthonormal columns.
class Embedding {
 public:
  static constexpr double kOrthoTol = 1e-8;

  Embedding() = default;
  /// Throws ContractError when |H^T H - I|_max exceeds kOrthoTol.
  explicit Embedding(Eigen::MatrixXd h);

  const Eigen::MatrixXd& matrix() const noexcept { return h_; }
  int n() const noexcept { return static_cast<int>(h_.rows()); }
  int d() const noexcept { return static_cast<int>(h_.cols()); }

 private:
  Eigen::MatrixXd h_;
};

struct ModelParams {
  double beta = 0.0;
  double p = 1.0;
  int d = 1;
};

/// Throws on beta <= 0, p < 1 or d outside [1, n). Returns false (and leaves
/// the caller to warn) when d undercounts the components of A.
bool check_model_params(const SimilarityGraph& g, const ModelParams& params);

/// |h_i - h_j|^2 = Q_ii + Q_jj - 2 Q_ij with Q = H H^T.
double edge_spread(const Embedding& h, int i, int j);

/// tr(H^T L(A o Z) H).
double trace_term(const SimilarityGraph& g, const EdgeIndicator& z, const Embedding& h);

/// f(Z, H) = tr(H^T L(A o Z) H) - beta tr(Abar Z), with tr(Abar Z) counting
/// every unordered edge twice.
double objective(const SimilarityGraph& g, const EdgeIndicator& z, const Embedding& h,
                 double beta);

/// Symmetrized per-edge gradient G_e = a_e |h_i - h_j|^2 - 2 beta abar_e.
/// f is linear in Z, so f(Z', H) - f(Z, H) = sum_e G_e (z'_e - z_e) exactly.
std::vector<double> grad_z(const SimilarityGraph& g, const Embedding& h, double beta);

/// 1e-12 * (1 + beta * max abar).
double default_zero_threshold(const SimilarityGraph& g, double beta);

/// Exact minimizer of the linear Z subproblem: drop edges with G_e above the
/// threshold, keep edges with G_e below minus the threshold, leave ties.
EdgeIndicator z_step(const EdgeIndicator& z, std::span<const double> grad, double zero_threshold);

struct HStepResult {
  Embedding h;
  double trace = 0.0;        // tr(H^T L(A o Z) H)
  double eigen_sum = 0.0;    // sum of the d returned eigenvalues
  double residual = 0.0;
  double residual_tol = 0.0;
};

/// d smallest eigenvectors of L(A o Z), with the eigensolver residual held to
/// eps / (2 d max(1, |L|_1)).
HStepResult h_step(const SimilarityGraph& g, const EdgeIndicator& z, int d, double eps,
                   const linalg::EigenOptions& opts = {});

}  // namespace cossc
