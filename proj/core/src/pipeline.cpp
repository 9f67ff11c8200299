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

#include "cossc/pipeline.hpp"

namespace cossc {

PipelineResult run_cossc(const SimilarityGraph& base, const MustLinkSet& j,
                         const SolverConfig& config, bool inject_missing,
                         const IterateObserver& observer) {
  SimilarityGraph g = scale_must_links(base, j, config.p, inject_missing);
  SolveResult solve = cossc_solve(g, config, std::nullopt, observer);
  ClusterAssignment assignment = extract_clusters(g, solve.z);
  return PipelineResult{std::move(g), std::move(solve), std::move(assignment)};
}

EvalReport evaluate(const PipelineResult& r, std::optional<std::span<const int>> truth,
                    const MustLinkSet* j) {
  EvalReport rep;
  if (truth) {
    rep.acc = accuracy(r.assignment.labels, *truth);
    rep.nmi = nmi(r.assignment.labels, *truth);
  }
  if (j) rep.rmv = rmv(r.graph, r.solve.z, *j);
  rep.num_clusters = r.assignment.num_clusters;
  rep.iterations = r.solve.trace.iterations;
  rep.f_final = r.solve.trace.f_history.back();
  rep.time_ms = r.solve.trace.wall_time.count();
  return rep;
}

}  // namespace cossc
