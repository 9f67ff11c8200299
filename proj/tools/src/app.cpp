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

#include "cossc_cli/app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "cossc/data.hpp"
#include "cossc/error.hpp"
#include "cossc/oracle.hpp"
#include "cossc/pipeline.hpp"
#include "cossc_cli/bench.hpp"
#include "cossc_cli/manifest.hpp"
#include "cossc_cli/svg.hpp"
#include "cossc_cli/version.hpp"

namespace cossc::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Thrown for bad flag values that CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Shape shape_or_usage(const std::string& token) {
  if (auto s = parse_shape(token)) return *s;
  std::string valid;
  for (Shape s : kAllShapes) valid += (valid.empty() ? "" : ", ") + std::string(to_string(s));
  throw UsageError("unknown shape '" + token + "' (one of: " + valid + ")");
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json report_json(const EvalReport& r, bool with_run_fields) {
  json j;
  if (r.acc) j["acc"] = *r.acc;
  if (r.nmi) j["nmi"] = *r.nmi;
  if (r.rmv) j["rmv"] = *r.rmv;
  if (with_run_fields) {
    j["num_clusters"] = r.num_clusters;
    j["iterations"] = r.iterations;
    j["f_final"] = r.f_final;
    j["time_ms"] = r.time_ms;
  }
  return j;
}

// ---- gen ----

struct GenArgs {
  std::string shape;
  int n = 200;
  double noise = 0.01;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen(const GenArgs& a, const RunManifest& base, std::ostream& out) {
  const Shape shape = shape_or_usage(a.shape);
  const auto ds = generate({shape, a.n, a.noise, a.seed});
  fs::create_directories(a.out);
  save_points(fs::path(a.out) / "points.csv", ds.points);
  save_labels(fs::path(a.out) / "labels.csv", std::span<const int>(ds.truth.labels));
  RunManifest m = base;
  m.config = {{"command", "gen"}, {"shape", a.shape}, {"n", a.n}, {"noise", a.noise}};
  m.seeds = {a.seed};
  m.write(a.out);
  out << "wrote " << ds.points.n() << " points (" << ideal_clusters(shape) << " clusters) to " << a.out << "\n";
  return kOk;
}

// ---- cluster ----

struct ClusterArgs {
  std::string points, edges, mustlinks, truth, out;
  int d = 0;
  std::string beta = "auto";
  double p = 10.0, eps = 1e-3;
  int max_iter = 500;
  std::uint64_t seed = 0;
  std::optional<int> knn;
  bool inject = false, svg = false;
};

int cmd_cluster(const ClusterArgs& a, const RunManifest& base, std::ostream& out) {
  std::optional<PointCloud> pts;
  SimilarityGraph g(1, {});
  RunManifest m = base;
  if (!a.points.empty()) {
    pts = load_points(a.points);
    KnnGraphOptions o;
    o.k_n = a.knn;
    g = build_knn_similarity(*pts, o);
    m.inputs.push_back(a.points);
  } else {
    g = load_edges(a.edges);
    m.inputs.push_back(a.edges);
  }
  MustLinkSet j;
  if (!a.mustlinks.empty()) {
    j = load_mustlinks(a.mustlinks, g.n());
    m.inputs.push_back(a.mustlinks);
  }
  std::optional<std::vector<int>> truth;
  if (!a.truth.empty()) {
    truth = load_labels(a.truth);
    m.inputs.push_back(a.truth);
    if (truth->size() != static_cast<std::size_t>(g.n())) {
      throw UsageError("truth has " + std::to_string(truth->size()) + " labels for " + std::to_string(g.n()) +
                       " points");
    }
  }

  SolverConfig config;
  config.d = a.d;
  try {
    config.beta = resolve_beta_rule(a.beta, a.d, g.n());
  } catch (const ContractError& e) {
    throw UsageError(e.what());
  }
  config.p = a.p;
  config.eps = a.eps;
  config.max_iter = a.max_iter;
  config.seed = a.seed;

  const auto r = run_cossc(g, j, config, a.inject);
  EvalReport rep = evaluate(r, truth ? std::optional<std::span<const int>>(*truth) : std::nullopt,
                            a.mustlinks.empty() ? nullptr : &j);

  fs::create_directories(a.out);
  const fs::path dir(a.out);
  save_labels(dir / "labels.csv", r.assignment);
  save_report(dir / "report.json", rep);

  const auto& t = r.solve.trace;
  json trace;
  trace["beta"] = r.solve.beta;
  trace["iterations"] = t.iterations;
  trace["termination"] = std::string(to_string(t.termination));
  trace["h_rejections"] = t.h_rejections;
  trace["f_history"] = t.f_history;
  trace["z_changes"] = t.z_changes;
  trace["edges_kept"] = r.solve.z.count_kept();
  trace["edges_total"] = r.solve.z.size();
  trace["wall_time_ms"] = t.wall_time.count();
  write_json(dir / "trace.json", trace);

  {
    std::ofstream se(dir / "surviving_edges.tsv");
    for (std::size_t e = 0; e < r.graph.num_edges(); ++e) {
      const Edge& ed = r.graph.edge(e);
      se << ed.i << '\t' << ed.j << '\t' << (r.assignment.surviving_edges[e] ? 1 : 0) << '\n';
    }
    if (!se) throw Error("cannot write surviving_edges.tsv");
  }

  if (a.svg) {
    if (pts && pts->dim() == 2) {
      write_text(dir / "clusters.svg", scatter_svg(*pts, r.assignment.labels, r.graph, r.assignment.surviving_edges));
    } else {
      out << "note: --svg needs 2-D --points input; no plot written\n";
    }
  }

  m.config = {{"command", "cluster"},
              {"d", a.d},
              {"beta", r.solve.beta},
              {"beta_flag", a.beta},
              {"p", a.p},
              {"eps", a.eps},
              {"max_iter", a.max_iter},
              {"inject_missing", a.inject}};
  if (a.knn) m.config["knn"] = *a.knn;
  m.seeds = {a.seed};
  m.write(dir);

  out << "clusters " << rep.num_clusters << ", iterations " << rep.iterations;
  if (rep.acc) out << ", acc " << *rep.acc;
  if (rep.rmv) out << ", rmv " << *rep.rmv;
  out << "\n";
  return kOk;
}

// ---- eval ----

struct EvalArgs {
  std::string pred, truth, z, mustlinks, out;
};

// Reads a surviving_edges.tsv written by `cluster`: i, j, kept (0 or 1).
std::map<std::pair<int, int>, bool> load_kept(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  std::map<std::pair<int, int>, bool> kept;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int i = 0, j = 0, k = 0;
    std::string extra;
    if (!(ls >> i >> j >> k) || (ls >> extra) || (k != 0 && k != 1) || i < 0 || j <= i) {
      throw ParseError(path.string() + ":" + std::to_string(n) + ": expected 'i<TAB>j<TAB>kept' with i < j", n);
    }
    kept[{i, j}] = k == 1;
  }
  return kept;
}

int cmd_eval(const EvalArgs& a, const RunManifest& base, std::ostream& out) {
  RunManifest m = base;
  const auto pred = load_labels(a.pred);
  const auto truth = load_labels(a.truth);
  m.inputs = {a.pred, a.truth};
  if (pred.size() != truth.size()) {
    throw UsageError("label files differ in length (" + std::to_string(pred.size()) + " vs " +
                     std::to_string(truth.size()) + ")");
  }
  EvalReport rep;
  rep.acc = accuracy(pred, truth);
  rep.nmi = nmi(pred, truth);
  if (!a.z.empty() && !a.mustlinks.empty()) {
    const auto kept = load_kept(a.z);
    const auto j = load_mustlinks(a.mustlinks, static_cast<int>(pred.size()));
    m.inputs.push_back(a.z);
    m.inputs.push_back(a.mustlinks);
    std::size_t violated = 0;
    for (const auto& pr : j.pairs()) {
      const auto it = kept.find(pr);
      if (it == kept.end()) {
        throw UsageError("must-link pair (" + std::to_string(pr.first) + ", " + std::to_string(pr.second) +
                         ") is not an edge of " + a.z);
      }
      violated += !it->second;
    }
    rep.rmv = j.empty() ? 0.0 : static_cast<double>(violated) / static_cast<double>(j.size());
  }
  const json j = report_json(rep, false);
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    write_json(fs::path(a.out) / "report.json", j);
    m.config = {{"command", "eval"}};
    m.write(a.out);
  }
  out << j.dump(2) << "\n";
  return kOk;
}

// ---- oracle ----

struct OracleArgs {
  std::string edges, mustlinks, out;
  int d = 0;
  double beta = 0.0, p = 10.0, eps = 1e-3;
  int samples = 200;
  std::uint64_t seed = 0;
};

std::string mask_string(std::uint32_t mask, std::size_t m) {
  std::string s;
  for (std::size_t e = 0; e < m; ++e) s += (mask >> e) & 1u ? '1' : '0';
  return s;
}

int cmd_oracle(const OracleArgs& a, const RunManifest& base, std::ostream& out) {
  RunManifest m = base;
  const auto g0 = load_edges(a.edges);
  m.inputs = {a.edges};
  if (g0.num_edges() > static_cast<std::size_t>(kOracleEdgeGuard)) {
    throw GuardError("instance has " + std::to_string(g0.num_edges()) + " edges; the oracle guard is " +
                         std::to_string(kOracleEdgeGuard),
                     static_cast<std::size_t>(kOracleEdgeGuard));
  }
  if (!(a.beta > 0.0)) throw UsageError("--beta must be positive");
  if (a.d < 1 || a.d > g0.n()) throw UsageError("--d must lie in [1, n]");
  MustLinkSet j;
  if (!a.mustlinks.empty()) {
    j = load_mustlinks(a.mustlinks, g0.n());
    m.inputs.push_back(a.mustlinks);
  }
  const auto g = scale_must_links(g0, j, a.p);
  const auto r = brute_force_mip(g, a.beta, a.d);
  const auto bar = compute_beta_bar(g, a.p);

  Verdict mustlinks_kept = Verdict::NotApplicable;
  if (a.d < g.n()) {
    SolverConfig config;
    config.d = a.d;
    config.beta = a.beta;
    config.p = a.p;
    config.eps = a.eps;
    config.seed = a.seed;
    const auto s = cossc_solve(g, config);
    mustlinks_kept = verify_mustlink_theorem(g, j, a.beta, a.p, s.z, s.h, a.eps);
  }
  const double margin = relaxation_margin(g, r, a.beta, a.d, a.samples, a.seed);

  json res;
  res["n"] = g.n();
  res["edges"] = g.num_edges();
  res["d"] = a.d;
  res["beta"] = a.beta;
  res["p"] = a.p;
  res["global_value"] = r.global_value;
  res["minimizers"] = r.minimizers.size();
  json masks = json::array();
  for (auto mask : r.minimizer_masks) masks.push_back(mask_string(mask, g.num_edges()));
  res["minimizer_masks"] = masks;
  res["beta_bar"] = {{"value", bar.value},
                     {"lambda_plus_min", bar.lambda_plus_min},
                     {"alpha", bar.alpha},
                     {"empty_mustlinks", bar.empty_mustlinks}};
  res["relaxation_margin"] = margin;
  res["verdicts"] = {
      {"trichotomy", std::string(to_string(check_trichotomy(g, r, a.d)))},
      {"large_beta_keeps_all_edges", std::string(to_string(check_large_beta(g, r, a.beta, a.d)))},
      {"small_beta_exact_rank", std::string(to_string(check_small_beta(g, r, a.beta, a.d, bar)))},
      {"mustlinks_kept", std::string(to_string(mustlinks_kept))},
      {"relaxation_floor", margin >= -1e-9 ? "pass" : "fail"}};
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    write_json(fs::path(a.out) / "oracle.json", res);
    m.config = {{"command", "oracle"}, {"d", a.d}, {"beta", a.beta}, {"p", a.p}, {"samples", a.samples}};
    m.seeds = {a.seed};
    m.write(a.out);
  }
  out << res.dump(2) << "\n";
  return kOk;
}

// ---- bench ----

struct BenchArgs {
  std::vector<std::string> shapes = {"all"}, betas = {"auto"}, methods = {"cossc"};
  std::vector<int> d_offsets = {0, 1, 2, 3, 4, 5};
  std::vector<double> ps = {10.0}, ss = {0.0};
  std::string mustlinks = "within", out;
  std::optional<int> n;
  double noise = 0.01;
  std::uint64_t seed = 0;
  int repeats = 1;
  std::optional<int> jobs;
  bool resume = false, no_plots = false;
};

int resolve_jobs(const std::optional<int>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("COSSC_JOBS")) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(env, &used);
      if (used == std::string(env).size() && v >= 1) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("COSSC_JOBS must be a positive integer, got '") + env + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_bench(const BenchArgs& a, const RunManifest& base, std::ostream& out) {
  BenchSpec spec;
  if (a.shapes.size() == 1 && a.shapes[0] == "all") {
    spec.shapes.assign(std::begin(kAllShapes), std::end(kAllShapes));
  } else {
    for (const auto& s : a.shapes) spec.shapes.push_back(shape_or_usage(s));
  }
  spec.n_per_cluster = a.n;
  spec.noise = a.noise;
  spec.d_offsets = a.d_offsets;
  spec.beta_rules = a.betas;
  spec.p_values = a.ps;
  spec.s_values = a.ss;
  if (a.mustlinks == "within") {
    spec.mustlinks = MustLinkMode::Within;
  } else if (a.mustlinks == "uniform") {
    spec.mustlinks = MustLinkMode::Uniform;
  } else {
    throw UsageError("--mustlinks must be within or uniform");
  }
  spec.methods.clear();
  for (const auto& m : a.methods) {
    if (m == "both") {
      spec.methods.insert(spec.methods.end(), {"cossc", "sca"});
    } else {
      spec.methods.push_back(m);
    }
  }
  spec.seed = a.seed;
  spec.repeats = a.repeats;
  spec.jobs = resolve_jobs(a.jobs);
  spec.resume = a.resume;
  spec.plots = !a.no_plots;

  try {
    const int failed = run_bench(spec, a.out, out);
    RunManifest m = base;
    json shapes = json::array();
    for (Shape s : spec.shapes) shapes.push_back(std::string(to_string(s)));
    m.config = {{"command", "bench"},     {"shapes", shapes},       {"n", a.n ? json(*a.n) : json("auto")},
                {"noise", a.noise},       {"d_offsets", a.d_offsets}, {"beta", a.betas},
                {"p", a.ps},              {"s", a.ss},              {"mustlinks", a.mustlinks},
                {"methods", a.methods},   {"repeats", a.repeats}};
    for (int r = 0; r < a.repeats; ++r) m.seeds.push_back(a.seed + static_cast<std::uint64_t>(r));
    m.write(a.out);
    (void)failed;
  } catch (const ContractError& e) {
    throw UsageError(e.what());
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semi-supervised clustering by graph partitioning", "cossc"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic 2-D dataset");
  g->add_option("--shape", gen.shape, "Shape token, e.g. two-moons")->required();
  g->add_option("--n", gen.n, "Points per cluster")->check(CLI::Range(20, 10000000));
  g->add_option("--noise", gen.noise, "Per-coordinate noise standard deviation")->check(CLI::NonNegativeNumber);
  g->add_option("--seed", gen.seed);
  g->add_option("--out", gen.out, "Output directory")->required();

  ClusterArgs cl;
  auto* c = app.add_subcommand("cluster", "Cluster points or a weighted graph");
  auto* opt_points = c->add_option("--points", cl.points, "points.csv")->check(CLI::ExistingFile);
  auto* opt_edges = c->add_option("--edges", cl.edges, "edges.tsv")->check(CLI::ExistingFile);
  opt_points->excludes(opt_edges);
  c->add_option("--mustlinks", cl.mustlinks, "mustlinks.tsv")->check(CLI::ExistingFile);
  c->add_option("--truth", cl.truth, "Ground-truth labels.csv for acc/nmi")->check(CLI::ExistingFile);
  c->add_option("--d", cl.d, "Embedding dimension")->required()->check(CLI::PositiveNumber);
  c->add_option("--beta", cl.beta, "auto, (d-1)/n, 1/n, 1/(10n) or a number");
  c->add_option("--p", cl.p, "Must-link weight scale")->check(CLI::Range(1.0, 1e300));
  c->add_option("--eps", cl.eps, "Stopping threshold")->check(CLI::NonNegativeNumber);
  c->add_option("--max-iter", cl.max_iter)->check(CLI::PositiveNumber);
  c->add_option("--seed", cl.seed);
  c->add_option("--knn", cl.knn, "Neighbors per point (default ceil(ln n))")->check(CLI::PositiveNumber);
  c->add_flag("--inject-missing", cl.inject, "Add must-link pairs that are not edges");
  c->add_flag("--svg", cl.svg, "Write clusters.svg (2-D points only)");
  c->add_option("--out", cl.out, "Output directory")->required();

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Score predicted labels");
  e->add_option("--pred", ev.pred)->required();
  e->add_option("--truth", ev.truth)->required();
  e->add_option("--z", ev.z, "surviving_edges.tsv from cluster");
  e->add_option("--mustlinks", ev.mustlinks);
  e->add_option("--out", ev.out, "Optional output directory for report.json");

  OracleArgs orc;
  auto* o = app.add_subcommand("oracle", "Enumerate every edge subset of a small instance");
  o->add_option("--edges", orc.edges)->required();
  o->add_option("--mustlinks", orc.mustlinks);
  o->add_option("--d", orc.d)->required();
  o->add_option("--beta", orc.beta)->required();
  o->add_option("--p", orc.p)->check(CLI::Range(1.0, 1e300));
  o->add_option("--eps", orc.eps)->check(CLI::NonNegativeNumber);
  o->add_option("--samples", orc.samples, "Random relaxed points to probe")->check(CLI::NonNegativeNumber);
  o->add_option("--seed", orc.seed);
  o->add_option("--out", orc.out);

  BenchArgs bn;
  auto* b = app.add_subcommand("bench", "Parameter sweeps over synthetic shapes");
  b->add_option("--shapes", bn.shapes, "Comma-separated shape tokens or all")->delimiter(',');
  b->add_option("--n", bn.n, "Points per cluster")->check(CLI::Range(20, 10000000));
  b->add_option("--noise", bn.noise)->check(CLI::NonNegativeNumber);
  b->add_option("--d-offsets", bn.d_offsets, "d - k* values")->delimiter(',');
  b->add_option("--beta", bn.betas, "Beta rules: auto, 1/n, 1/(10n), (d-1)/n or numbers")->delimiter(',');
  b->add_option("--p", bn.ps)->delimiter(',');
  b->add_option("--s", bn.ss, "Must-link percentages")->delimiter(',');
  b->add_option("--mustlinks", bn.mustlinks, "within or uniform");
  b->add_option("--method", bn.methods, "cossc, sca or both")->delimiter(',');
  b->add_option("--seed", bn.seed);
  b->add_option("--repeats", bn.repeats, "Seeds per shape, starting at --seed")->check(CLI::PositiveNumber);
  b->add_option("--jobs", bn.jobs, "Concurrent runs (default COSSC_JOBS, then core count)")
      ->check(CLI::PositiveNumber);
  b->add_flag("--resume", bn.resume, "Skip cells already recorded as ok");
  b->add_flag("--no-plots", bn.no_plots);
  b->add_option("--out", bn.out)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsage;
  }
  if (c->parsed() && cl.points.empty() == cl.edges.empty()) {
    err << "error: cluster needs exactly one of --points or --edges\n";
    return kUsage;
  }

  RunManifest base;
  base.command_line.push_back("cossc");
  base.command_line.insert(base.command_line.end(), args.begin(), args.end());
  try {
    if (g->parsed()) return cmd_gen(gen, base, out);
    if (c->parsed()) return cmd_cluster(cl, base, out);
    if (e->parsed()) return cmd_eval(ev, base, out);
    if (o->parsed()) return cmd_oracle(orc, base, out);
    if (b->parsed()) return cmd_bench(bn, base, out);
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsage;
  } catch (const ParseError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsage;
  } catch (const InfeasibleConstraintError& ex) {
    err << "error: " << ex.what() << "\n";
    for (const auto& [i, j] : ex.pairs()) err << "  " << i << '\t' << j << "\n";
    return kInfeasible;
  } catch (const GuardError& ex) {
    err << "error: " << ex.what() << "\n";
    return kGuard;
  } catch (const ContractError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsage;
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace cossc::cli
