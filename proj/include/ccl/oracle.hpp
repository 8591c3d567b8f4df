#pragma once

// Brute-force checks: affine grid scans with exact per-cell evaluation,
// 4-connected flood fills and a sphere scan of the positive index cone.

#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ccl/cones.hpp"
#include "ccl/forms.hpp"
#include "ccl/sphere.hpp"

namespace ccl {

struct Window {
  double x0 = -3, x1 = 3, y0 = -3, y1 = 3;
};

/// Exact record at a cell centre (a, b, 1). `boundary` marks centres within
/// eps of F = 0 or H = 0 (distance estimated by |f| / |grad f|).
struct ScanCell {
  double a = 0, b = 0;
  int sign_f = 0, sign_h = 0;
  Signature sig;
  bool boundary = false;
};

struct ScanGrid {
  Rational k;
  Window window;
  int n = 0;
  std::vector<ScanCell> cells;  // row-major, row j holds b = y0 + (j + 1/2) dy

  const ScanCell& at(int i, int j) const { return cells[std::size_t(j) * n + i]; }

  /// Cells off the boundary where the signature disagrees with the sign of H:
  /// H > 0 needs (1, 2, 0), H < 0 needs (2, 1, 0) or (0, 3, 0).
  std::size_t trichotomy_violations() const {
    std::size_t bad = 0;
    for (const ScanCell& c : cells) {
      if (c.boundary) continue;
      bool ok = c.sign_h > 0   ? c.sig == Signature{1, 2, 0}
                : c.sign_h < 0 ? (c.sig == Signature{2, 1, 0} || c.sig == Signature{0, 3, 0})
                               : c.sig.zero > 0;
      if (!ok) ++bad;
    }
    return bad;
  }

  std::string to_csv() const {
    std::ostringstream os;
    os << "# scan k=" << to_string(k) << " n=" << n << "\n";
    os << "a,b,signF,signH,pos,neg,zero,boundary\n";
    char buf[96];
    for (const ScanCell& c : cells) {
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,%d,%d,%d,%d,%d,%d\n", c.a, c.b, c.sign_f, c.sign_h, c.sig.pos,
                    c.sig.neg, c.sig.zero, c.boundary ? 1 : 0);
      os << buf;
    }
    return os.str();
  }
};

inline ScanGrid grid_scan(const Rational& k, const Window& w, int n, const Tolerance& tol = {}) {
  if (n < 2) throw PreconditionError("grid_scan needs n >= 2");
  if (!(w.x1 > w.x0) || !(w.y1 > w.y0)) throw PreconditionError("grid_scan: empty window");
  ParamCubic f(k);
  TrilinearForm mu = f.form();
  // The Hessian polynomial from second partials, independent of the polar matrix.
  HomPoly<Rational> hp = hessian_polynomial(mu.cubic());
  PlaneCurve fc = cubic_curve(k), hc = hessian_curve(k);
  ScanGrid g;
  g.k = k;
  g.window = w;
  g.n = n;
  g.cells.resize(std::size_t(n) * n);
  double dx = (w.x1 - w.x0) / n, dy = (w.y1 - w.y0) / n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      ScanCell& c = g.cells[std::size_t(j) * n + i];
      c.a = w.x0 + (i + 0.5) * dx;
      c.b = w.y0 + (j + 0.5) * dy;
      Vec3q p{Rational(c.a), Rational(c.b), Rational(1)};
      c.sign_f = sgn(f.value(p));
      c.sign_h = sgn(hp(p));
      c.sig = signature(polar_matrix(mu, p));
      Vec3d pd{c.a, c.b, 1.0};
      double scale = std::max({1.0, std::fabs(c.a), std::fabs(c.b)});
      for (const PlaneCurve* cv : {&fc, &hc}) {
        Vec3d gr = cv->gradient(pd);
        double gn = std::hypot(gr[0], gr[1]);
        if (gn == 0.0 || std::fabs(cv->value(pd)) / gn <= tol.eps * scale) c.boundary = true;
      }
    }
  return g;
}

/// 4-connected components of the cells satisfying the predicate.
inline int flood_components(const ScanGrid& g, const std::function<bool(const ScanCell&)>& pred) {
  int n = g.n;
  std::vector<char> seen(g.cells.size(), 0);
  int count = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      std::size_t s = std::size_t(j) * n + i;
      if (seen[s] || !pred(g.cells[s])) continue;
      ++count;
      std::vector<std::pair<int, int>> stack{{i, j}};
      seen[s] = 1;
      while (!stack.empty()) {
        auto [ci, cj] = stack.back();
        stack.pop_back();
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int e = 0; e < 4; ++e) {
          int ni = ci + di[e], nj = cj + dj[e];
          if (ni < 0 || nj < 0 || ni >= n || nj >= n) continue;
          std::size_t t = std::size_t(nj) * n + ni;
          if (seen[t] || !pred(g.cells[t])) continue;
          seen[t] = 1;
          stack.push_back({ni, nj});
        }
      }
    }
  return count;
}

/// Components of {L on S^2 : F(L) > 0, signature (1, 2, 0)} over the vertex
/// graph of an icosphere. Antipodes are not glued: F(-L) = -F(L).
inline int sphere_component_count(const Rational& k, int depth, const Tolerance& tol = {}) {
  if (depth < 0 || depth > 8) throw PreconditionError("sphere_component_count: depth must be in [0, 8]");
  ParamCubic f(k);
  TrilinearForm mu = f.form();
  Icosphere ico(depth);
  const auto& v = ico.vertices();
  std::vector<char> member(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    try {
      member[i] = positive_index_member(mu, v[i], tol);
    } catch (const IndeterminateError&) {
      member[i] = positive_index_member(mu, to_rational(v[i]));
    }
  }
  DisjointSets ds(v.size());
  for (const auto& e : ico.edges())
    if (member[e[0]] && member[e[1]]) ds.unite(e[0], e[1]);
  std::vector<char> root(v.size(), 0);
  int count = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (member[i] && !root[ds.find(i)]) {
      root[ds.find(i)] = 1;
      ++count;
    }
  return count;
}

}  // namespace ccl
