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

#include <optional>
#include <span>

#include "cossc/extract.hpp"
#include "cossc/graph.hpp"
#include "cossc/metrics.hpp"
#include "cossc/solver.hpp"

namespace cossc {

struct PipelineResult {
  SimilarityGraph graph;  // with must-links scaled by config.p
  SolveResult solve;
  ClusterAssignment assignment;
};

/// Scales must-links, solves and extracts clusters. Throws
/// InfeasibleConstraintError for a must-link that is not an edge unless
/// `inject_missing` is set.
PipelineResult run_cossc(const SimilarityGraph& base, const MustLinkSet& j,
                         const SolverConfig& config, bool inject_missing = false,
                         const IterateObserver& observer = {});

/// acc and nmi when `truth` is given, rmv when `j` is given.
EvalReport evaluate(const PipelineResult& r, std::optional<std::span<const int>> truth,
                    const MustLinkSet* j);

}  // namespace cossc
