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

#include "cossc_cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "cossc/error.hpp"

namespace cossc::cli {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double w = 640, h = 480, left = 60, right = 20, top = 40, bottom = 50;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  double px(double x) const { return left + (x - x0) / (x1 - x0) * (w - left - right); }
  double py(double y) const { return h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom); }
};

void pad_range(double& lo, double& hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double m = 0.05 * (hi - lo);
  lo -= m;
  hi += m;
}

std::string open_svg(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\" font-family=\"sans-serif\" font-size=\"12\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle") {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\">" + escape(s) +
         "</text>\n";
}

std::string axes(const Frame& f, const std::string& title, const std::string& xlabel, const std::string& ylabel) {
  std::ostringstream o;
  o << "<rect x=\"" << num(f.left) << "\" y=\"" << num(f.top) << "\" width=\"" << num(f.w - f.left - f.right)
    << "\" height=\"" << num(f.h - f.top - f.bottom) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = f.x0 + (f.x1 - f.x0) * t / 4, yv = f.y0 + (f.y1 - f.y0) * t / 4;
    o << text(f.px(xv), f.h - f.bottom + 16, num(xv));
    o << text(f.left - 6, f.py(yv) + 4, num(yv), "end");
  }
  o << text(f.w / 2, 24, title);
  o << text(f.w / 2, f.h - 12, xlabel);
  o << "<text x=\"14\" y=\"" << num(f.h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
    << num(f.h / 2) << ")\">" << escape(ylabel) << "</text>\n";
  return o.str();
}

}  // namespace

std::string scatter_svg(const PointCloud& x, const std::vector<int>& labels, const SimilarityGraph& g,
                        const std::vector<bool>& kept) {
  if (x.dim() != 2) throw ContractError("scatter plot needs 2-D points");
  if (labels.size() != static_cast<std::size_t>(x.n()) || kept.size() != g.num_edges()) {
    throw ContractError("scatter plot inputs disagree in size");
  }
  Frame f;
  f.w = f.h = 640;
  f.left = f.right = f.top = f.bottom = 20;
  f.x0 = x.points.col(0).minCoeff();
  f.x1 = x.points.col(0).maxCoeff();
  f.y0 = x.points.col(1).minCoeff();
  f.y1 = x.points.col(1).maxCoeff();
  // Equal aspect ratio.
  const double span = std::max(f.x1 - f.x0, f.y1 - f.y0);
  const double cx = (f.x0 + f.x1) / 2, cy = (f.y0 + f.y1) / 2;
  f.x0 = cx - span / 2;
  f.x1 = cx + span / 2;
  f.y0 = cy - span / 2;
  f.y1 = cy + span / 2;
  pad_range(f.x0, f.x1);
  pad_range(f.y0, f.y1);

  std::ostringstream o;
  o << open_svg(f.w, f.h);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    o << "<line x1=\"" << num(f.px(x.points(ed.i, 0))) << "\" y1=\"" << num(f.py(x.points(ed.i, 1)))
      << "\" x2=\"" << num(f.px(x.points(ed.j, 0))) << "\" y2=\"" << num(f.py(x.points(ed.j, 1)))
      << (kept[e] ? "\" stroke=\"#bbbbbb\" stroke-width=\"0.6\"/>\n"
                  : "\" stroke=\"#d62728\" stroke-width=\"0.8\" stroke-dasharray=\"3,2\"/>\n");
  }
  for (int i = 0; i < x.n(); ++i) {
    const int l = labels[i];
    o << "<circle cx=\"" << num(f.px(x.points(i, 0))) << "\" cy=\"" << num(f.py(x.points(i, 1)))
      << "\" r=\"2.5\" fill=\"" << kPalette[((l % 10) + 10) % 10] << "\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string line_plot_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                          const std::vector<Series>& series) {
  Frame f;
  f.right = 170;
  f.w = 780;
  double inf = std::numeric_limits<double>::infinity();
  f.x0 = inf, f.x1 = -inf, f.y0 = inf, f.y1 = -inf;
  for (const auto& s : series) {
    for (const auto& [xv, yv] : s.points) {
      f.x0 = std::min(f.x0, xv);
      f.x1 = std::max(f.x1, xv);
      f.y0 = std::min(f.y0, yv);
      f.y1 = std::max(f.y1, yv);
    }
  }
  if (!std::isfinite(f.x0)) f.x0 = 0, f.x1 = 1, f.y0 = 0, f.y1 = 1;
  pad_range(f.x0, f.x1);
  pad_range(f.y0, f.y1);

  std::ostringstream o;
  o << open_svg(f.w, f.h) << axes(f, title, xlabel, ylabel);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % 10];
    auto pts = series[k].points;
    std::sort(pts.begin(), pts.end());
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [xv, yv] : pts) o << num(f.px(xv)) << ',' << num(f.py(yv)) << ' ';
    o << "\"/>\n";
    for (const auto& [xv, yv] : pts) {
      o << "<circle cx=\"" << num(f.px(xv)) << "\" cy=\"" << num(f.py(yv)) << "\" r=\"3\" fill=\"" << color
        << "\"/>\n";
    }
    const double ly = f.top + 16.0 * static_cast<double>(k) + 8;
    o << "<line x1=\"" << num(f.w - f.right + 10) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(f.w - f.right + 30)
      << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << text(f.w - f.right + 36, ly + 4, series[k].name, "start");
  }
  o << "</svg>\n";
  return o.str();
}

std::string heatmap_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                        const std::vector<std::string>& cols, const std::vector<std::string>& rows,
                        const std::vector<std::vector<double>>& values) {
  const double cell = 56, left = 90, top = 40;
  const double w = left + cell * static_cast<double>(cols.size()) + 20;
  const double h = top + cell * static_cast<double>(rows.size()) + 50;
  std::ostringstream o;
  o << open_svg(w, h) << text(w / 2, 24, title) << text(left + cell * cols.size() / 2.0, h - 10, xlabel);
  o << "<text x=\"14\" y=\"" << num(top + cell * rows.size() / 2.0) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
    << num(top + cell * rows.size() / 2.0) << ")\">" << escape(ylabel) << "</text>\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    // First row at the bottom.
    const double y = top + cell * static_cast<double>(rows.size() - 1 - r);
    o << text(left - 6, y + cell / 2 + 4, rows[r], "end");
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const double v = values.at(r).at(c);
      const double x = left + cell * static_cast<double>(c);
      if (std::isnan(v)) continue;
      const int shade = static_cast<int>(std::lround(255 * (1 - std::clamp(v, 0.0, 1.0))));
      char fill[16];
      std::snprintf(fill, sizeof fill, "#%02x%02xff", shade, shade);
      o << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(cell) << "\" height=\"" << num(cell)
        << "\" fill=\"" << fill << "\" stroke=\"white\"/>\n";
      o << "<text x=\"" << num(x + cell / 2) << "\" y=\"" << num(y + cell / 2 + 4) << "\" text-anchor=\"middle\" fill=\""
        << (v > 0.6 ? "white" : "black") << "\">" << num(v) << "</text>\n";
    }
  }
  for (std::size_t c = 0; c < cols.size(); ++c) {
    o << text(left + cell * (static_cast<double>(c) + 0.5), top + cell * rows.size() + 16, cols[c]);
  }
  o << "</svg>\n";
  return o.str();
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
  if (!out) throw Error("cannot write " + path.string());
}

}  // namespace cossc::cli
