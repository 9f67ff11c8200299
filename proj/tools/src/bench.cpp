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

#include "cossc_cli/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "cossc/baseline.hpp"
#include "cossc/error.hpp"
#include "cossc/pipeline.hpp"
#include "cossc_cli/svg.hpp"

namespace cossc::cli {

namespace {

struct Instance {
  Shape shape;
  std::uint64_t seed;
  Dataset data;
  SimilarityGraph graph;
};

struct Cell {
  const Instance* inst;
  std::string method;
  int d;
  std::string beta_rule;  // empty for sca
  double p;               // NaN for sca
  double s;
};

std::string g17(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? g17(*v) : ""; }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

// Identifies a cell independently of its outcome: the leading nine columns.
std::string key_of(const std::vector<std::string>& cols) {
  std::string k;
  for (int i = 0; i < 9; ++i) k += cols.at(i) + ",";
  return k;
}

std::string leading_columns(const Cell& c, int n, double beta) {
  return c.method + "," + std::string(to_string(c.inst->shape)) + "," + std::to_string(n) + "," +
         std::to_string(c.d) + "," + c.beta_rule + "," + g17(beta) + "," + g17(c.p) + "," + g17(c.s) + "," +
         std::to_string(c.inst->seed);
}

MustLinkSet draw_mustlinks(const Instance& inst, double s, MustLinkMode mode) {
  if (s <= 0.0) return MustLinkSet{};
  if (mode == MustLinkMode::Within) return sample_mustlinks_within(inst.data.truth, inst.graph, s, inst.seed);
  return sample_mustlinks_uniform(inst.graph, s / 100.0, inst.seed);
}

std::string run_cell(const Cell& c, MustLinkMode mode) {
  const Instance& inst = *c.inst;
  const int n = inst.graph.n();
  double beta = std::nan("");
  std::string tail;
  try {
    const auto j = draw_mustlinks(inst, c.s, mode);
    const auto t0 = std::chrono::steady_clock::now();
    if (c.method == "cossc") {
      beta = resolve_beta_rule(c.beta_rule, c.d, n);
      SolverConfig config;
      config.d = c.d;
      config.beta = beta;
      config.p = c.p;
      config.seed = inst.seed;
      const auto r = run_cossc(inst.graph, j, config);
      auto rep = evaluate(r, std::span<const int>(inst.data.truth.labels), &j);
      rep.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      tail = opt(rep.acc) + "," + opt(rep.nmi) + "," + opt(rep.rmv) + "," + std::to_string(rep.num_clusters) +
             "," + std::to_string(rep.iterations) + "," + g6(rep.time_ms) + ",ok";
    } else {
      const auto r = spectral_cluster(sca_similarity(inst.graph, j), c.d, inst.seed);
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      std::size_t violated = 0;
      for (const auto& [a, b] : j.pairs()) violated += r.labels[a] != r.labels[b];
      const double rmv = j.empty() ? 0.0 : static_cast<double>(violated) / static_cast<double>(j.size());
      tail = g17(accuracy(r.labels, inst.data.truth.labels)) + "," + g17(nmi(r.labels, inst.data.truth.labels)) +
             "," + g17(rmv) + "," + std::to_string(r.num_clusters) + ",," + g6(ms) + ",ok";
    }
  } catch (const InfeasibleConstraintError& e) {
    tail = ",,,,,,infeasible";
  } catch (const SolverError& e) {
    tail = ",,,,,,solver_error: " + sanitize(e.what());
  } catch (const std::exception& e) {
    tail = ",,,,,,error: " + sanitize(e.what());
  }
  return leading_columns(c, n, beta) + "," + tail;
}

struct Row {
  std::string method, shape, beta_rule;
  int d = 0;
  double p = 0, acc = 0, rmv = 0;
  bool has_rmv = false;
};

std::vector<Row> read_ok_rows(const std::filesystem::path& csv) {
  std::vector<Row> rows;
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto c = split_csv(line);
    if (c.size() != 16 || c[15] != "ok" || c[9].empty()) continue;
    Row r;
    r.method = c[0];
    r.shape = c[1];
    r.d = std::stoi(c[3]);
    r.beta_rule = c[4];
    r.p = c[6].empty() ? std::nan("") : std::stod(c[6]);
    r.acc = std::stod(c[9]);
    r.has_rmv = !c[11].empty();
    if (r.has_rmv) r.rmv = std::stod(c[11]);
    rows.push_back(r);
  }
  return rows;
}

void write_plots(const BenchSpec& spec, const std::filesystem::path& out, const std::vector<Row>& rows) {
  const bool several_methods = spec.methods.size() > 1;
  std::map<std::string, std::map<int, std::pair<double, int>>> by_series;
  for (const Row& r : rows) {
    auto& cell = by_series[several_methods ? r.method + ":" + r.shape : r.shape][r.d];
    cell.first += r.acc;
    ++cell.second;
  }
  std::vector<Series> series;
  for (const auto& [name, pts] : by_series) {
    Series s{name, {}};
    for (const auto& [d, acc] : pts) s.points.emplace_back(d, acc.first / acc.second);
    series.push_back(std::move(s));
  }
  write_text(out / "acc_vs_d.svg", line_plot_svg("mean ACC vs d", "d", "ACC", series));

  if (spec.beta_rules.size() > 1) {
    std::map<std::string, std::map<int, std::pair<double, int>>> by_rule;
    for (const Row& r : rows) {
      if (r.method != "cossc") continue;
      auto& cell = by_rule[r.beta_rule][r.d];
      cell.first += r.acc;
      ++cell.second;
    }
    std::vector<Series> rule_series;
    for (const auto& [rule, pts] : by_rule) {
      Series s{"beta = " + rule, {}};
      for (const auto& [d, acc] : pts) s.points.emplace_back(d, acc.first / acc.second);
      rule_series.push_back(std::move(s));
    }
    write_text(out / "acc_vs_d_by_beta.svg", line_plot_svg("mean ACC vs d per beta rule", "d", "ACC", rule_series));
  }

  if (spec.beta_rules.size() > 1 || spec.p_values.size() > 1) {
    for (Shape shape : spec.shapes) {
      const std::string name(to_string(shape));
      std::vector<std::string> cols, row_names = spec.beta_rules;
      for (double p : spec.p_values) cols.push_back(g6(p));
      std::vector<std::vector<double>> sum(row_names.size(), std::vector<double>(cols.size(), 0.0));
      std::vector<std::vector<int>> cnt(row_names.size(), std::vector<int>(cols.size(), 0));
      for (const Row& r : rows) {
        if (r.method != "cossc" || r.shape != name || !r.has_rmv) continue;
        for (std::size_t b = 0; b < row_names.size(); ++b) {
          for (std::size_t q = 0; q < cols.size(); ++q) {
            if (r.beta_rule == row_names[b] && r.p == spec.p_values[q]) {
              sum[b][q] += r.rmv;
              ++cnt[b][q];
            }
          }
        }
      }
      for (std::size_t b = 0; b < row_names.size(); ++b) {
        for (std::size_t q = 0; q < cols.size(); ++q) sum[b][q] = cnt[b][q] ? sum[b][q] / cnt[b][q] : std::nan("");
      }
      write_text(out / ("rmv_heatmap_" + name + ".svg"),
                 heatmap_svg("mean RMV, " + name, "p", "beta", cols, row_names, sum));
    }
  }
}

}  // namespace

int default_points_per_cluster(Shape s) {
  switch (s) {
    case Shape::TwoMoons:
      return 150;
    case Shape::FourBlocksNoise:
      return 60;
    default:
      return 100;
  }
}

double resolve_beta_rule(const std::string& rule, int d, int n) {
  if (n <= 0) throw ContractError("beta rule needs n > 0");
  if (rule == "auto" || rule == "(d-1)/n") return static_cast<double>(d - 1) / n;
  if (rule == "1/n") return 1.0 / n;
  if (rule == "1/(10n)") return 1.0 / (10.0 * n);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(rule, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != rule.size() || !(v > 0.0) || !std::isfinite(v)) {
    throw ContractError("beta must be auto, (d-1)/n, 1/n, 1/(10n) or a positive number, got '" + rule + "'");
  }
  return v;
}

int run_bench(const BenchSpec& spec, const std::filesystem::path& out, std::ostream& log) {
  if (spec.shapes.empty() || spec.d_offsets.empty() || spec.beta_rules.empty() || spec.p_values.empty() ||
      spec.s_values.empty() || spec.methods.empty() || spec.repeats < 1) {
    throw ContractError("every bench grid must be nonempty");
  }
  for (const auto& m : spec.methods) {
    if (m != "cossc" && m != "sca") throw ContractError("unknown method '" + m + "' (cossc or sca)");
  }
  for (const auto& rule : spec.beta_rules) resolve_beta_rule(rule, 2, 1);
  for (int off : spec.d_offsets) {
    if (off < 0) throw ContractError("d offsets must be >= 0");
  }
  for (double p : spec.p_values) {
    if (!(p >= 1.0)) throw ContractError("p must be >= 1");
  }
  for (double s : spec.s_values) {
    if (!(s >= 0.0 && s <= 100.0)) throw ContractError("s must lie in [0, 100]");
  }
  if (spec.jobs < 1) throw ContractError("jobs must be >= 1");
  std::filesystem::create_directories(out);

  std::vector<Instance> instances;
  for (Shape shape : spec.shapes) {
    for (int r = 0; r < spec.repeats; ++r) {
      const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(r);
      auto ds = generate({shape, spec.n_per_cluster.value_or(default_points_per_cluster(shape)), spec.noise, seed});
      auto g = build_knn_similarity(ds.points);
      instances.push_back({shape, seed, std::move(ds), std::move(g)});
    }
  }

  std::vector<Cell> cells;
  for (const auto& inst : instances) {
    const int k = ideal_clusters(inst.shape);
    for (const auto& method : spec.methods) {
      for (int off : spec.d_offsets) {
        for (double s : spec.s_values) {
          if (method == "sca") {
            cells.push_back({&inst, method, k + off, "", std::nan(""), s});
            continue;
          }
          for (const auto& rule : spec.beta_rules) {
            for (double p : spec.p_values) cells.push_back({&inst, method, k + off, rule, p, s});
          }
        }
      }
    }
  }

  const auto csv = out / "results.csv";
  std::set<std::string> done;
  if (spec.resume && std::filesystem::exists(csv)) {
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      const auto c = split_csv(line);
      if (c.size() == 16 && c[15] == "ok") done.insert(key_of(c));
    }
  }
  const bool append = spec.resume && std::filesystem::exists(csv);
  std::ofstream sink(csv, append ? std::ios::app : std::ios::trunc);
  if (!sink) throw Error("cannot write " + csv.string());
  if (!append) sink << kBenchColumns << '\n' << std::flush;

  std::vector<const Cell*> todo;
  for (const auto& c : cells) {
    const int n = c.inst->graph.n();
    const double beta = c.method == "cossc" ? resolve_beta_rule(c.beta_rule, c.d, n) : std::nan("");
    if (!done.count(key_of(split_csv(leading_columns(c, n, beta))))) todo.push_back(&c);
  }
  log << "bench: " << cells.size() << " cells, " << todo.size() << " to run, " << spec.jobs << " jobs\n";

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  int failures = 0;
  auto worker = [&] {
    for (std::size_t i = next++; i < todo.size(); i = next++) {
      const std::string row = run_cell(*todo[i], spec.mustlinks);
      std::lock_guard<std::mutex> lock(mu);
      sink << row << '\n' << std::flush;
      if (row.size() < 3 || row.compare(row.size() - 3, 3, ",ok") != 0) ++failures;
    }
  };
  std::vector<std::thread> pool;
  const int threads = std::min<int>(spec.jobs, static_cast<int>(std::max<std::size_t>(todo.size(), 1)));
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  sink.close();

  if (spec.plots) write_plots(spec, out, read_ok_rows(csv));
  log << "bench: " << failures << " failed rows\n";
  return failures;
}

}  // namespace cossc::cli
