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

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace cossc::linalg {

/// One stored entry of a symmetric matrix, upper triangle (i <= j).
struct Triplet {
  int i;
  int j;
  double value;
};

/// Real symmetric matrix. Only one triangle is ever read on construction,
/// so the stored operand is symmetric by construction.
///
/// Two storage modes: dense (small operands, oracle work) and sparse (graph
/// Laplacians). Both answer the same queries.
class SymMatrix {
 public:
  SymMatrix() : SymMatrix(zeros(0)) {}

  static SymMatrix zeros(int n);
  /// Reads the lower triangle of `m`; the upper triangle is ignored.
  static SymMatrix from_dense(const Eigen::MatrixXd& m);
  /// Entries with i > j are rejected; duplicate (i, j) entries are summed.
  static SymMatrix from_upper_triplets(int n, std::span<const Triplet> entries);

  int n() const noexcept { return n_; }
  bool is_sparse() const noexcept {
    return std::holds_alternative<Eigen::SparseMatrix<double>>(storage_);
  }

  double operator()(int i, int j) const;
  double diagonal(int i) const { return (*this)(i, i); }
  double max_diagonal() const;
  /// Largest absolute column sum.
  double norm1() const;
  bool all_finite() const;

  Eigen::MatrixXd to_dense() const;
  /// Full (both triangles) sparse copy.
  Eigen::SparseMatrix<double> to_sparse() const;
  std::vector<Triplet> upper_triplets() const;

  Eigen::MatrixXd multiply(const Eigen::MatrixXd& x) const;

 private:
  SymMatrix(int n, std::variant<Eigen::MatrixXd, Eigen::SparseMatrix<double>> s)
      : n_(n), storage_(std::move(s)) {}

  int n_ = 0;
  std::variant<Eigen::MatrixXd, Eigen::SparseMatrix<double>> storage_;
};

/// L(W) = Diag(W e) - W. Throws ContractError unless W >= 0 with zero
/// diagonal. The result keeps W's storage mode.
SymMatrix laplacian(const SymMatrix& w);

/// (L*(N))_ij = N_ii - N_ij, the adjoint of the Laplacian operator under the
/// Frobenius inner product.
double laplacian_adjoint_entry(const SymMatrix& n, int i, int j);

struct SpectrumResult {
  Eigen::VectorXd eigenvalues;   // ascending, length d
  Eigen::MatrixXd eigenvectors;  // n x d, orthonormal columns
  double residual_norm = 0.0;    // max_k ||M v_k - lambda_k v_k||_2
};

struct EigenOptions {
  // Full dense decomposition at or below this many rows, shift-invert
  // block Krylov iteration above.
  int dense_cutoff = 2000;
  std::uint64_t seed = 0;
  double shift = -1e-8;
  int max_restarts = 300;
};

/// The d algebraically smallest eigenpairs of a symmetric PSD matrix.
///
/// Eigenvectors follow a sign convention: the largest-magnitude entry of
/// every column is nonnegative. Inside a degenerate eigenvalue cluster any
/// orthonormal basis may come back.
///
/// `residual_tol` is raised to `residual_floor(m)` when it asks for more
/// accuracy than double precision can certify. Throws SolverError (with the
/// best residual) when the iterative path does not reach the tolerance.
SpectrumResult smallest_eigpairs(const SymMatrix& m, int d, double residual_tol,
                                 const EigenOptions& opts = {});

/// Smallest residual that smallest_eigpairs will insist on for `m`.
double residual_floor(const SymMatrix& m);

/// All eigenvalues, ascending, via dense decomposition.
Eigen::VectorXd all_eigenvalues(const SymMatrix& m);

/// 1e-8 * max(1, largest diagonal entry).
double default_rank_tol(const SymMatrix& m);

/// Number of eigenvalues strictly greater than tau.
int numerical_rank(const SymMatrix& m, std::optional<double> tau = std::nullopt);

/// Flips columns so each column's largest-magnitude entry is nonnegative.
void apply_sign_convention(Eigen::MatrixXd& v);

/// max |V^T V - I|.
double orthonormality_error(const Eigen::MatrixXd& v);

}  // namespace cossc::linalg
