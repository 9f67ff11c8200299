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

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "cossc/error.hpp"
#include "cossc/graph.hpp"
#include "cossc/linalg.hpp"
#include "cossc/model.hpp"

namespace cossc {

struct SolverConfig {
  int d = 2;
  std::optional<double> beta;  // nullopt: (d - 1) / n
  double p = 10.0;             // must-link scale, consumed when building Abar
  double eps = 1e-3;
  int max_iter = 500;
  std::uint64_t seed = 0;
  std::optional<double> zero_threshold;  // nullopt: default_zero_threshold
  int dense_cutoff = 2000;
  std::optional<double> rank_tol;  // nullopt: linalg::default_rank_tol

  /// Explicit beta, or (d - 1) / n. For d = 1 the automatic value is 0,
  /// which validate() rejects.
  double resolved_beta(int n) const;
  /// Throws ContractError on a nonpositive parameter or d outside [1, n).
  void validate(int n) const;
  linalg::EigenOptions eigen_options(std::uint64_t stream = 0) const;
};

enum class Termination { EpsDecrease, IterCap };

std::string_view to_string(Termination t);

struct SolverTrace {
  std::vector<double> f_history;  // f(Z^t, H^t), t = 0, 1, ...
  std::vector<int> z_changes;     // edges flipped by each Z-step
  Termination termination = Termination::IterCap;
  int iterations = 0;             // Z-steps computed
  int h_rejections = 0;           // H-steps discarded by the descent guard
  std::chrono::duration<double, std::milli> wall_time{0};
};

struct SolveResult {
  EdgeIndicator z;
  Embedding h;
  SolverTrace trace;
  double beta = 0.0;
};

/// Raised when an eigensolve fails mid-run; carries the trace so far.
class SolveFailure : public SolverError {
 public:
  SolveFailure(const SolverError& cause, SolverTrace trace)
      : SolverError(cause.what(), cause.best_residual()), trace_(std::move(trace)) {}
  const SolverTrace& trace() const noexcept { return trace_; }

 private:
  SolverTrace trace_;
};

/// Called with every Z iterate the loop produces: Z^0 first, then each Z-step
/// result, including the final candidate that triggers termination.
using IterateObserver = std::function<void(int t, const EdgeIndicator& z)>;

/// d smallest eigenvectors of L(A), sign-normalized.
Embedding default_h0(const SimilarityGraph& g, const SolverConfig& config);

/// Block coordinate descent on (Z, H) starting from Z = sign(A).
///
/// Each pass takes an exact Z-step at the current H; if f drops by no more
/// than eps the current (Z, H) is returned. Otherwise an inexact H-step on
/// the new Z is accepted only when it does not increase f.
SolveResult cossc_solve(const SimilarityGraph& g, const SolverConfig& config,
                        std::optional<Embedding> h0 = std::nullopt,
                        const IterateObserver& observer = {});

struct BlockwiseReport {
  double z_gap = 0.0;  // f(Z, H) - min over the relaxed box of f(., H)
  double h_gap = 0.0;  // tr(H^T L H) - sum of the d smallest eigenvalues
  bool pass = false;
};

/// Checks the blockwise eps-minimizer conditions with an exact Z-step and a
/// dense eigensolve. Gaps below 1e-12 (1 + |f|) count as zero.
BlockwiseReport check_blockwise(const SimilarityGraph& g, const EdgeIndicator& z,
                                const Embedding& h, double beta, double eps);

}  // namespace cossc
