#pragma once

// Deterministic SVG output: traced curves, lines and labels in an affine
// window, and signature heatmaps from grid scans.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "ccl/curve.hpp"
#include "ccl/oracle.hpp"
#include "ccl/steinian.hpp"

namespace ccl {

/// An affine polyline with a style class and a name.
struct SvgPath {
  std::string cls, name;
  std::vector<std::array<double, 2>> pts;
};

struct SvgLine {
  std::string cls, name;
  LineQ line;
};

struct SvgLabel {
  std::string text;
  double x = 0, y = 0;
};

struct PlotConfig {
  Window window{-3, 3, -3, 3};
  int width = 600, height = 600;
  int resolution = 4096;
};

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, f, v);
  std::string s = buf;
  return s == "-0.00" ? "0.00" : s;
}
inline std::string px(double v) { return fmt("%.2f", v); }
inline std::string num(double v) { return fmt("%.17g", v); }

/// Newton steps on f(x, y, 1) along the gradient.
inline std::array<double, 2> polish(const PlaneCurve& c, double x, double y) {
  for (int it = 0; it < 12; ++it) {
    Vec3d p{x, y, 1.0};
    double f = c.value(p);
    Vec3d g = c.gradient(p);
    double gg = g[0] * g[0] + g[1] * g[1];
    if (gg == 0.0 || f == 0.0) break;
    double dx = f * g[0] / gg, dy = f * g[1] / gg;
    x -= dx;
    y -= dy;
    if (std::fabs(dx) + std::fabs(dy) < 1e-17 * (1 + std::fabs(x) + std::fabs(y))) break;
  }
  return {x, y};
}

/// Affine pieces of a traced branch inside the window grown by `margin`.
inline std::vector<SvgPath> clip_polyline(const Polyline& pl, const PlaneCurve& curve, const Window& w,
                                          const std::string& cls) {
  double mx = 0.02 * (w.x1 - w.x0), my = 0.02 * (w.y1 - w.y0);
  std::vector<SvgPath> out;
  SvgPath cur{cls, pl.branch.label, {}};
  auto flush = [&] {
    if (cur.pts.size() >= 2) out.push_back(cur);
    cur.pts.clear();
  };
  for (std::size_t i = 0; i < pl.size(); ++i) {
    const Vec3d& r = pl.rays[i];
    if (std::fabs(r[2]) < 1e-12) {
      flush();
      continue;
    }
    double x = r[0] / r[2], y = r[1] / r[2];
    if (x < w.x0 - mx || x > w.x1 + mx || y < w.y0 - my || y > w.y1 + my) {
      flush();
      continue;
    }
    cur.pts.push_back(polish(curve, x, y));
  }
  flush();
  return out;
}

}  // namespace detail

/// Fixed-order SVG with a viewBox from the window. Pixel coordinates carry two
/// decimals; data-xy attributes carry the affine coordinates round-trip exact.
inline std::string render_svg(const std::vector<SvgPath>& paths, const std::vector<SvgLine>& lines,
                              const std::vector<SvgLabel>& labels, const PlotConfig& cfg,
                              const std::string& title = "") {
  const Window& w = cfg.window;
  if (!(w.x1 > w.x0) || !(w.y1 > w.y0)) throw PreconditionError("render_svg: empty window");
  double sx = cfg.width / (w.x1 - w.x0), sy = cfg.height / (w.y1 - w.y0);
  auto X = [&](double x) { return detail::px((x - w.x0) * sx); };
  auto Y = [&](double y) { return detail::px((w.y1 - y) * sy); };
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cfg.width << "\" height=\"" << cfg.height
     << "\" viewBox=\"0 0 " << cfg.width << " " << cfg.height << "\" data-window=\"" << detail::num(w.x0) << ","
     << detail::num(w.x1) << "," << detail::num(w.y0) << "," << detail::num(w.y1) << "\">\n";
  if (!title.empty()) os << "<title>" << title << "</title>\n";
  os << "<style>.cubic{stroke:#000;stroke-width:1.6;fill:none}.hessian{stroke:#c00;stroke-width:1.2;fill:none}"
        ".asymptote{stroke:#06c;stroke-width:0.8;stroke-dasharray:6 4}.axis{stroke:#999;stroke-width:0.5}"
        "text{font:12px sans-serif}</style>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << cfg.width << "\" height=\"" << cfg.height << "\" fill=\"#fff\"/>\n";
  if (w.y0 < 0 && w.y1 > 0)
    os << "<line class=\"axis\" x1=\"0.00\" y1=\"" << Y(0) << "\" x2=\"" << cfg.width << ".00\" y2=\"" << Y(0)
       << "\"/>\n";
  if (w.x0 < 0 && w.x1 > 0)
    os << "<line class=\"axis\" x1=\"" << X(0) << "\" y1=\"0.00\" x2=\"" << X(0) << "\" y2=\"" << cfg.height
       << ".00\"/>\n";
  for (const SvgLine& l : lines) {
    // Clip ax + by + c = 0 to the window; lines missing it are skipped.
    double a = to_double(l.line.c[0]), b = to_double(l.line.c[1]), c = to_double(l.line.c[2]);
    std::vector<std::array<double, 2>> hits;
    auto add = [&](double x, double y) {
      double tx = 1e-12 * (w.x1 - w.x0), ty = 1e-12 * (w.y1 - w.y0);
      if (x < w.x0 - tx || x > w.x1 + tx || y < w.y0 - ty || y > w.y1 + ty) return;
      for (const auto& h : hits)
        if (std::fabs(h[0] - x) <= tx && std::fabs(h[1] - y) <= ty) return;
      hits.push_back({x, y});
    };
    if (b != 0.0) {
      add(w.x0, -(a * w.x0 + c) / b);
      add(w.x1, -(a * w.x1 + c) / b);
    }
    if (a != 0.0) {
      add(-(b * w.y0 + c) / a, w.y0);
      add(-(b * w.y1 + c) / a, w.y1);
    }
    if (hits.size() < 2) continue;
    double x1 = hits[0][0], y1 = hits[0][1], x2 = hits[1][0], y2 = hits[1][1];
    os << "<line class=\"" << l.cls << "\" data-name=\"" << l.name << "\" data-line=\"" << to_string(l.line.c[0])
       << "," << to_string(l.line.c[1]) << "," << to_string(l.line.c[2]) << "\" x1=\"" << X(x1) << "\" y1=\""
       << Y(y1) << "\" x2=\"" << X(x2) << "\" y2=\"" << Y(y2) << "\"/>\n";
  }
  for (const SvgPath& p : paths) {
    os << "<polyline class=\"" << p.cls << "\" data-name=\"" << p.name << "\" points=\"";
    for (std::size_t i = 0; i < p.pts.size(); ++i) os << (i ? " " : "") << X(p.pts[i][0]) << "," << Y(p.pts[i][1]);
    os << "\" data-xy=\"";
    for (std::size_t i = 0; i < p.pts.size(); ++i)
      os << (i ? " " : "") << detail::num(p.pts[i][0]) << "," << detail::num(p.pts[i][1]);
    os << "\"/>\n";
  }
  for (const SvgLabel& l : labels) {
    if (l.x < w.x0 || l.x > w.x1 || l.y < w.y0 || l.y > w.y1) continue;
    os << "<circle cx=\"" << X(l.x) << "\" cy=\"" << Y(l.y) << "\" r=\"2.50\"/>\n";
    os << "<text x=\"" << detail::px((l.x - w.x0) * sx + 4) << "\" y=\"" << detail::px((w.y1 - l.y) * sy - 4)
       << "\">" << l.text << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

/// The cubic, its Hessian and the three asymptotes, with the special points
/// labelled. Hessian branches are omitted when the Hessian is singular.
inline std::string plot_figure(const Rational& k, const PlotConfig& cfg = {}) {
  Regime r = regime_of(k);
  if (r == Regime::DegenerateCubic) throw DegenerateParameter("plot: the cubic is singular at k = 1");
  std::vector<SvgPath> paths;
  std::vector<CurveKind> kinds{CurveKind::Cubic};
  if (!is_degenerate(r)) kinds.push_back(CurveKind::Hessian);
  for (CurveKind kind : kinds) {
    PlaneCurve curve = make_curve(k, kind);
    for (const BranchSpec& s : branch_specs(k, kind)) {
      Polyline pl = trace_branch(k, s.id, cfg.resolution);
      auto pieces = detail::clip_polyline(pl, curve, cfg.window, to_string(kind));
      paths.insert(paths.end(), pieces.begin(), pieces.end());
    }
  }
  std::vector<SvgLine> lines;
  auto as = asymptotes(k);
  for (int i = 0; i < 3; ++i) lines.push_back({"asymptote", "T" + std::to_string(i + 1), as[i]});
  std::vector<SvgLabel> labels;
  if (!is_degenerate(r)) {
    auto q = asymptote_tangency_points(k);
    for (int i = 0; i < 3; ++i) {
      if (sgn(q[i][2]) == 0) continue;
      Vec3d p = to_double(q[i]);
      labels.push_back({detail::special_name(k, i), p[0] / p[2], p[1] / p[2]});
    }
  }
  return render_svg(paths, lines, labels, cfg, "k = " + to_string(k));
}

/// Cells of a grid scan coloured by signature; boundary cells in grey.
inline std::string render_heatmap(const ScanGrid& g, int width = 600, int height = 600) {
  const Window& w = g.window;
  double cw = double(width) / g.n, ch = double(height) / g.n;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << " " << height << "\" data-window=\"" << detail::num(w.x0) << ","
     << detail::num(w.x1) << "," << detail::num(w.y0) << "," << detail::num(w.y1) << "\">\n";
  os << "<title>signature k = " << to_string(g.k) << "</title>\n";
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      const ScanCell& c = g.at(i, j);
      const char* color = "#bbbbbb";
      if (!c.boundary) {
        if (c.sig == Signature{1, 2, 0}) color = c.sign_f > 0 ? "#2c7bb6" : "#abd9e9";
        else if (c.sig == Signature{2, 1, 0}) color = "#fdae61";
        else if (c.sig == Signature{0, 3, 0} || c.sig == Signature{3, 0, 0}) color = "#d7191c";
      }
      os << "<rect x=\"" << detail::px(i * cw) << "\" y=\"" << detail::px((g.n - 1 - j) * ch) << "\" width=\""
         << detail::px(cw) << "\" height=\"" << detail::px(ch) << "\" fill=\"" << color << "\" data-sig=\""
         << c.sig.pos << "," << c.sig.neg << "," << c.sig.zero << "\"/>\n";
    }
  os << "</svg>\n";
  return os.str();
}

}  // namespace ccl
