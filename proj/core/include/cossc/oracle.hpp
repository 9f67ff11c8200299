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
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cossc/graph.hpp"
#include "cossc/model.hpp"

namespace cossc {

/// Largest edge count the enumerating routines accept (2^20 subsets).
inline constexpr std::size_t kOracleEdgeGuard = 20;

/// Binary indicator whose bit e keeps edge e.
EdgeIndicator mask_to_indicator(std::uint32_t mask, std::size_t num_edges);

/// Sum of the d smallest eigenvalues of L(A o Z) minus beta tr(Abar Z),
/// i.e. the objective minimized over orthonormal H. Z may be fractional.
double phi(const SimilarityGraph& g, const EdgeIndicator& z, double beta, int d);

struct OracleResult {
  double global_value = 0.0;
  std::vector<std::uint32_t> minimizer_masks;  // ascending
  std::vector<EdgeIndicator> minimizers;
  std::vector<double> phi_table;  // indexed by edge bitmask
  std::vector<int> rank_table;    // numerical rank of L(A o Z) per bitmask
  double tie_tol = 0.0;           // values within this of the minimum tie
};

/// Enumerates every binary Z over the edges. Throws GuardError above
/// kOracleEdgeGuard edges and ContractError unless 1 <= d <= n.
OracleResult brute_force_mip(const SimilarityGraph& g, double beta, int d);

struct BetaBar {
  double value = 0.0;
  double lambda_plus_min = 0.0;  // smallest positive eigenvalue over nonzero Z
  double alpha = 0.0;
  double weight_sum = 0.0;       // sum of A over ordered pairs
  bool empty_mustlinks = false;  // alpha fell back to p
};

/// Threshold below which every global minimizer has exactly rank n - d,
/// evaluated by enumeration. Must-links are the flagged edges of `g`.
BetaBar compute_beta_bar(const SimilarityGraph& g, double p);

enum class Verdict { Pass, Fail, NotApplicable };

std::string_view to_string(Verdict v);

/// Number of components of the full graph, n - rank L(A).
int base_component_count(const SimilarityGraph& g);

/// Every minimizer has rank > n - d, or rank = n - d with binary Z.
/// Not applicable when d is below the component count of the graph.
Verdict check_trichotomy(const SimilarityGraph& g, const OracleResult& r, int d);

/// For beta > 1: the only minimizer keeps every edge.
Verdict check_large_beta(const SimilarityGraph& g, const OracleResult& r, double beta, int d);

/// For beta below beta_bar: every minimizer has rank exactly n - d.
Verdict check_small_beta(const SimilarityGraph& g, const OracleResult& r, double beta, int d,
                         const BetaBar& bar);

/// Must-link edges survive in (Z, H) when beta p > 2 and the Z-block gap of
/// (Z, H) is at most eps_gap < 2 min_J a. Not applicable when either
/// hypothesis fails; vacuous pass for empty J.
Verdict verify_mustlink_theorem(const SimilarityGraph& g, const MustLinkSet& j, double beta,
                                double p, const EdgeIndicator& z, const Embedding& h,
                                double eps_gap);

/// Samples fractional Z uniformly from the box and reports the smallest
/// phi - global_value seen; nonnegative when no relaxed point beats the
/// binary optimum.
double relaxation_margin(const SimilarityGraph& g, const OracleResult& r, double beta, int d,
                         int samples, std::uint64_t seed);

}  // namespace cossc
