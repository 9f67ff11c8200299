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

#include "cossc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>

#include <Eigen/SparseCholesky>

#include "cossc/error.hpp"

namespace cossc::linalg {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_index(int n, int i, int j) {
  if (i < 0 || j < 0 || i >= n || j >= n) {
    throw ContractError("index (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") out of range for n = " + std::to_string(n));
  }
}

Eigen::MatrixXd thin_q(const Eigen::MatrixXd& w) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(w);
  return qr.householderQ() * Eigen::MatrixXd::Identity(w.rows(), w.cols());
}

// Orthonormalizes the columns of `w` against themselves and against the
// first `prev_cols` columns of `basis`. Two passes of projection + QR.
Eigen::MatrixXd orthonormalize_against(const Eigen::MatrixXd& basis, Eigen::Index prev_cols,
                                       Eigen::MatrixXd w) {
  for (int pass = 0; pass < 2; ++pass) {
    if (prev_cols > 0) {
      const auto k = basis.leftCols(prev_cols);
      w -= k * (k.transpose() * w);
    }
    w = thin_q(w);
  }
  return w;
}

SpectrumResult dense_smallest(const SymMatrix& m, int d, double tol) {
  const Eigen::MatrixXd dense = m.to_dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  if (es.info() != Eigen::Success) {
    throw SolverError("dense symmetric eigensolver failed", std::numeric_limits<double>::infinity());
  }
  SpectrumResult out;
  out.eigenvalues = es.eigenvalues().head(d);
  out.eigenvectors = es.eigenvectors().leftCols(d);
  apply_sign_convention(out.eigenvectors);
  const Eigen::MatrixXd r =
      dense * out.eigenvectors - out.eigenvectors * out.eigenvalues.asDiagonal();
  out.residual_norm = r.colwise().norm().maxCoeff();
  if (out.residual_norm > tol) {
    throw SolverError("dense eigensolve residual " + std::to_string(out.residual_norm) +
                          " above tolerance " + std::to_string(tol),
                      out.residual_norm);
  }
  return out;
}

// Shift-invert restarted block Krylov iteration. The operator
// (M - shift I)^{-1} has its dominant invariant subspace aligned with the
// smallest eigenpairs of M; Rayleigh-Ritz is performed with M itself.
SpectrumResult iterative_smallest(const SymMatrix& m, int d, double tol, const EigenOptions& opts) {
  const int n = m.n();
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> apply_inverse;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> sparse_ldlt;
  Eigen::LDLT<Eigen::MatrixXd> dense_ldlt;
  if (m.is_sparse()) {
    Eigen::SparseMatrix<double> shifted = m.to_sparse();
    Eigen::SparseMatrix<double> eye(n, n);
    eye.setIdentity();
    shifted -= opts.shift * eye;
    sparse_ldlt.compute(shifted);
    if (sparse_ldlt.info() != Eigen::Success) {
      throw SolverError("shifted factorization failed", std::numeric_limits<double>::infinity());
    }
    apply_inverse = [&sparse_ldlt](const Eigen::MatrixXd& x) -> Eigen::MatrixXd {
      return sparse_ldlt.solve(x);
    };
  } else {
    Eigen::MatrixXd shifted = m.to_dense();
    shifted.diagonal().array() -= opts.shift;
    dense_ldlt.compute(shifted);
    if (dense_ldlt.info() != Eigen::Success) {
      throw SolverError("shifted factorization failed", std::numeric_limits<double>::infinity());
    }
    apply_inverse = [&dense_ldlt](const Eigen::MatrixXd& x) -> Eigen::MatrixXd {
      return dense_ldlt.solve(x);
    };
  }

  const int block = std::min(n, d + std::max(3, d / 2));
  const int depth = std::clamp(n / block - 1, 0, 4);
  const Eigen::Index cols = static_cast<Eigen::Index>(block) * (depth + 1);

  std::mt19937_64 gen(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd v(n, block);
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    for (Eigen::Index r = 0; r < v.rows(); ++r) v(r, c) = normal(gen);
  }
  v = thin_q(v);

  SpectrumResult best;
  best.residual_norm = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd basis(n, cols);
  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    basis.leftCols(block) = v;
    for (int s = 1; s <= depth; ++s) {
      const Eigen::Index prev = static_cast<Eigen::Index>(block) * s;
      Eigen::MatrixXd w = apply_inverse(basis.middleCols(prev - block, block));
      basis.middleCols(prev, block) = orthonormalize_against(basis, prev, std::move(w));
    }
    const Eigen::MatrixXd mk = m.multiply(basis);
    Eigen::MatrixXd t = basis.transpose() * mk;
    t = 0.5 * (t + t.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const Eigen::MatrixXd y = es.eigenvectors().leftCols(block);
    const Eigen::MatrixXd ritz = basis * y;
    const Eigen::VectorXd theta = es.eigenvalues().head(d);
    const Eigen::MatrixXd r =
        mk * y.leftCols(d) - ritz.leftCols(d) * theta.asDiagonal();
    const double res = r.colwise().norm().maxCoeff();
    if (res < best.residual_norm) {
      best.residual_norm = res;
      best.eigenvalues = theta;
      best.eigenvectors = ritz.leftCols(d);
    }
    if (res <= tol) break;
    v = thin_q(ritz);
  }
  if (best.residual_norm > tol) {
    throw SolverError("iterative eigensolve did not converge; best residual " +
                          std::to_string(best.residual_norm),
                      best.residual_norm);
  }
  apply_sign_convention(best.eigenvectors);
  return best;
}

}  // namespace

SymMatrix SymMatrix::zeros(int n) {
  if (n < 0) throw ContractError("negative dimension");
  Eigen::SparseMatrix<double> s(n, n);
  return SymMatrix(n, std::move(s));
}

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ContractError("symmetric matrix must be square");
  Eigen::MatrixXd full = m.selfadjointView<Eigen::Lower>();
  return SymMatrix(static_cast<int>(m.rows()), std::move(full));
}

SymMatrix SymMatrix::from_upper_triplets(int n, std::span<const Triplet> entries) {
  if (n < 0) throw ContractError("negative dimension");
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(entries.size() * 2);
  for (const auto& e : entries) {
    check_index(n, e.i, e.j);
    if (e.i > e.j) throw ContractError("triplet below the diagonal; store i <= j only");
    trips.emplace_back(e.i, e.j, e.value);
    if (e.i != e.j) trips.emplace_back(e.j, e.i, e.value);
  }
  Eigen::SparseMatrix<double> s(n, n);
  s.setFromTriplets(trips.begin(), trips.end());
  s.makeCompressed();
  return SymMatrix(n, std::move(s));
}

double SymMatrix::operator()(int i, int j) const {
  check_index(n_, i, j);
  return std::visit(overloaded{[&](const Eigen::MatrixXd& d) { return d(i, j); },
                               [&](const Eigen::SparseMatrix<double>& s) { return s.coeff(i, j); }},
                    storage_);
}

double SymMatrix::max_diagonal() const {
  if (n_ == 0) return 0.0;
  return std::visit(
      overloaded{[](const Eigen::MatrixXd& d) { return d.diagonal().maxCoeff(); },
                 [](const Eigen::SparseMatrix<double>& s) {
                   return Eigen::VectorXd(s.diagonal()).maxCoeff();
                 }},
      storage_);
}

double SymMatrix::norm1() const {
  if (n_ == 0) return 0.0;
  return std::visit(
      overloaded{[](const Eigen::MatrixXd& d) { return d.cwiseAbs().colwise().sum().maxCoeff(); },
                 [this](const Eigen::SparseMatrix<double>& s) {
                   Eigen::VectorXd sums = Eigen::VectorXd::Zero(n_);
                   for (int k = 0; k < s.outerSize(); ++k) {
                     for (Eigen::SparseMatrix<double>::InnerIterator it(s, k); it; ++it) {
                       sums(it.col()) += std::abs(it.value());
                     }
                   }
                   return sums.maxCoeff();
                 }},
      storage_);
}

bool SymMatrix::all_finite() const {
  return std::visit(
      overloaded{[](const Eigen::MatrixXd& d) { return d.allFinite(); },
                 [](const Eigen::SparseMatrix<double>& s) {
                   for (Eigen::Index k = 0; k < s.nonZeros(); ++k) {
                     if (!std::isfinite(s.valuePtr()[k])) return false;
                   }
                   return true;
                 }},
      storage_);
}

Eigen::MatrixXd SymMatrix::to_dense() const {
  return std::visit(overloaded{[](const Eigen::MatrixXd& d) -> Eigen::MatrixXd { return d; },
                               [](const Eigen::SparseMatrix<double>& s) -> Eigen::MatrixXd {
                                 return Eigen::MatrixXd(s);
                               }},
                    storage_);
}

Eigen::SparseMatrix<double> SymMatrix::to_sparse() const {
  return std::visit(
      overloaded{[](const Eigen::MatrixXd& d) -> Eigen::SparseMatrix<double> {
                   return d.sparseView();
                 },
                 [](const Eigen::SparseMatrix<double>& s) -> Eigen::SparseMatrix<double> { return s; }},
      storage_);
}

std::vector<Triplet> SymMatrix::upper_triplets() const {
  std::vector<Triplet> out;
  std::visit(overloaded{[&](const Eigen::MatrixXd& d) {
                          for (int j = 0; j < n_; ++j) {
                            for (int i = 0; i <= j; ++i) {
                              if (d(i, j) != 0.0) out.push_back({i, j, d(i, j)});
                            }
                          }
                        },
                        [&](const Eigen::SparseMatrix<double>& s) {
                          for (int k = 0; k < s.outerSize(); ++k) {
                            for (Eigen::SparseMatrix<double>::InnerIterator it(s, k); it; ++it) {
                              const int i = static_cast<int>(it.row());
                              const int j = static_cast<int>(it.col());
                              if (i <= j && it.value() != 0.0) out.push_back({i, j, it.value()});
                            }
                          }
                        }},
             storage_);
  return out;
}

Eigen::MatrixXd SymMatrix::multiply(const Eigen::MatrixXd& x) const {
  if (x.rows() != n_) throw ContractError("dimension mismatch in multiply");
  return std::visit(
      overloaded{[&](const Eigen::MatrixXd& d) -> Eigen::MatrixXd { return d * x; },
                 [&](const Eigen::SparseMatrix<double>& s) -> Eigen::MatrixXd { return s * x; }},
      storage_);
}

SymMatrix laplacian(const SymMatrix& w) {
  const int n = w.n();
  const auto entries = w.upper_triplets();
  Eigen::VectorXd degree = Eigen::VectorXd::Zero(n);
  std::vector<Triplet> out;
  out.reserve(entries.size() + static_cast<std::size_t>(n));
  for (const auto& e : entries) {
    if (!std::isfinite(e.value)) throw ContractError("non-finite weight");
    if (e.i == e.j) {
      throw ContractError("weight matrix has nonzero diagonal at " + std::to_string(e.i));
    }
    if (e.value < 0.0) {
      throw ContractError("negative weight at (" + std::to_string(e.i) + ", " +
                          std::to_string(e.j) + ")");
    }
    degree(e.i) += e.value;
    degree(e.j) += e.value;
    out.push_back({e.i, e.j, -e.value});
  }
  for (int i = 0; i < n; ++i) {
    if (degree(i) != 0.0) out.push_back({i, i, degree(i)});
  }
  auto lap = SymMatrix::from_upper_triplets(n, out);
  if (w.is_sparse()) return lap;
  return SymMatrix::from_dense(lap.to_dense());
}

double laplacian_adjoint_entry(const SymMatrix& n, int i, int j) {
  return n(i, i) - n(i, j);
}

double residual_floor(const SymMatrix& m) {
  return 10.0 * std::max(1, m.n()) * std::numeric_limits<double>::epsilon() *
         std::max(1.0, m.norm1());
}

SpectrumResult smallest_eigpairs(const SymMatrix& m, int d, double residual_tol,
                                 const EigenOptions& opts) {
  if (d < 1 || d >= m.n()) {
    throw ContractError("need 1 <= d < n (d = " + std::to_string(d) +
                        ", n = " + std::to_string(m.n()) + ")");
  }
  if (!m.all_finite()) throw ContractError("matrix has non-finite entries");
  const double tol = std::max(residual_tol, residual_floor(m));
  if (m.n() <= opts.dense_cutoff) return dense_smallest(m, d, tol);
  return iterative_smallest(m, d, tol, opts);
}

Eigen::VectorXd all_eigenvalues(const SymMatrix& m) {
  if (m.n() == 0) return Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.to_dense(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double default_rank_tol(const SymMatrix& m) {
  return 1e-8 * std::max(1.0, m.max_diagonal());
}

int numerical_rank(const SymMatrix& m, std::optional<double> tau) {
  const double t = tau.value_or(default_rank_tol(m));
  if (!(t > 0.0)) throw ContractError("rank tolerance must be positive");
  const Eigen::VectorXd ev = all_eigenvalues(m);
  return static_cast<int>((ev.array() > t).count());
}

void apply_sign_convention(Eigen::MatrixXd& v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      // Ties within rounding go to the lowest row so the rule is stable.
      const double mag = std::abs(v(r, c));
      if (mag > best * (1.0 + 1e-12) + 1e-300) {
        best = mag;
        arg = r;
      }
    }
    if (v.rows() > 0 && v(arg, c) < 0.0) v.col(c) = -v.col(c);
  }
}

double orthonormality_error(const Eigen::MatrixXd& v) {
  if (v.cols() == 0) return 0.0;
  const Eigen::MatrixXd g = v.transpose() * v - Eigen::MatrixXd::Identity(v.cols(), v.cols());
  return g.cwiseAbs().maxCoeff();
}

}  // namespace cossc::linalg
