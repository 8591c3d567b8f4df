#pragma once

// Real plane curves of the family and their Hessians: inflexions, asymptotes,
// branch tracing on the sphere, component counts, tangents and intersections.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ccl/forms.hpp"
#include "ccl/polynomial.hpp"
#include "ccl/sphere.hpp"

namespace ccl {

enum class CurveKind { Cubic, Hessian };

inline const char* to_string(CurveKind c) { return c == CurveKind::Cubic ? "cubic" : "hessian"; }

/// Line l x + m y + n z = 0, normalized so the first nonzero coefficient is
/// 1 (exact) or positive with unit norm (float).
template <Scalar T>
struct Line {
  Vec3<T> c;

  Line() = default;
  explicit Line(Vec3<T> coeffs) : c(std::move(coeffs)) {
    if (c.is_zero()) throw PreconditionError("line with all coefficients zero");
    int lead = !ccl::is_zero(c[0]) ? 0 : (!ccl::is_zero(c[1]) ? 1 : 2);
    if constexpr (is_exact_v<T>) {
      Rational s = c[lead];
      c = {Rational(c[0] / s), Rational(c[1] / s), Rational(c[2] / s)};
    } else {
      c = normalized(c);
      if (c[lead] < 0) c = -c;
    }
  }

  T operator()(const Vec3<T>& p) const { return dot(c, p); }

  /// Same line up to scale.
  bool same_as(const Line& o, double tol = 1e-9) const {
    Vec3<T> x = cross(c, o.c);
    if constexpr (is_exact_v<T>) {
      return x.is_zero();
    } else {
      return norm(x) <= tol;
    }
  }
};

using LineQ = Line<Rational>;
using LineD = Line<double>;

inline LineD to_double(const LineQ& l) { return LineD(to_double(l.c)); }

/// The seven open regions cut out of the affine plane by x = 0, y = 0 and
/// x + y = 1. Boundary marks points on one of those lines.
enum class AffineRegion { Triangle, NegQuad, Far, SectorE, SectorN, EdgeS, EdgeW, Boundary };

inline const char* to_string(AffineRegion r) {
  switch (r) {
    case AffineRegion::Triangle: return "Triangle";
    case AffineRegion::NegQuad: return "NegQuad";
    case AffineRegion::Far: return "Far";
    case AffineRegion::SectorE: return "SectorE";
    case AffineRegion::SectorN: return "SectorN";
    case AffineRegion::EdgeS: return "EdgeS";
    case AffineRegion::EdgeW: return "EdgeW";
    case AffineRegion::Boundary: return "Boundary";
  }
  return "?";
}

template <Scalar T>
AffineRegion region_of(const T& x, const T& y) {
  int sx = sign_int(x), sy = sign_int(y), sw = sign_int(T(1 - x - y));
  if (sx == 0 || sy == 0 || sw == 0) return AffineRegion::Boundary;
  if (sx > 0 && sy > 0) return sw > 0 ? AffineRegion::Triangle : AffineRegion::Far;
  if (sx < 0 && sy < 0) return AffineRegion::NegQuad;
  if (sw < 0) return sy < 0 ? AffineRegion::SectorE : AffineRegion::SectorN;
  return sy < 0 ? AffineRegion::EdgeS : AffineRegion::EdgeW;
}

/// Region of an affine ray (z != 0); Boundary for points at infinity.
inline AffineRegion region_of(const Vec3d& p) {
  if (p[2] == 0.0) return AffineRegion::Boundary;
  return region_of(p[0] / p[2], p[1] / p[2]);
}

/// A ternary cubic with fast float evaluation. The exact polynomial is kept
/// alongside for rational queries.
class PlaneCurve {
 public:
  PlaneCurve(CurveKind kind, Rational k, HomPoly<Rational> poly)
      : kind_(kind), k_(std::move(k)), exact_(std::move(poly)) {
    if (exact_.degree() != 3) throw PreconditionError("PlaneCurve expects a cubic");
    for (std::size_t n = 0; n < 10; ++n) c_[n] = exact_[n].get_d();
    scale_ = exact_.coefficient_scale();
  }

  CurveKind kind() const { return kind_; }
  const Rational& k() const { return k_; }
  const HomPoly<Rational>& exact() const { return exact_; }
  double coefficient_scale() const { return scale_; }

  // Coefficient order: x3 x2y x2z xy2 xyz xz2 y3 y2z yz2 z3.
  double value(const Vec3d& p) const {
    double x = p[0], y = p[1], z = p[2];
    return x * (x * (c_[0] * x + c_[1] * y + c_[2] * z) + y * (c_[3] * y + c_[4] * z) + c_[5] * z * z) +
           y * (y * (c_[6] * y + c_[7] * z) + c_[8] * z * z) + c_[9] * z * z * z;
  }
  Vec3d gradient(const Vec3d& p) const {
    double x = p[0], y = p[1], z = p[2];
    return {3 * c_[0] * x * x + 2 * c_[1] * x * y + 2 * c_[2] * x * z + c_[3] * y * y + c_[4] * y * z + c_[5] * z * z,
            c_[1] * x * x + 2 * c_[3] * x * y + c_[4] * x * z + 3 * c_[6] * y * y + 2 * c_[7] * y * z + c_[8] * z * z,
            c_[2] * x * x + c_[4] * x * y + 2 * c_[5] * x * z + c_[7] * y * y + 2 * c_[8] * y * z + 3 * c_[9] * z * z};
  }
  Rational value(const Vec3q& p) const { return exact_(p); }
  Vec3q gradient(const Vec3q& p) const { return exact_.gradient(p); }

  /// Sum of absolute monomial contributions at p; the natural size of value(p).
  double local_scale(const Vec3d& p) const {
    double x = std::fabs(p[0]), y = std::fabs(p[1]), z = std::fabs(p[2]);
    double m[10] = {x * x * x, x * x * y, x * x * z, x * y * y, x * y * z, x * z * z, y * y * y, y * y * z, y * z * z, z * z * z};
    double s = 0.0;
    for (int n = 0; n < 10; ++n) s += std::fabs(c_[n]) * m[n];
    return s;
  }
  /// |value| relative to local_scale.
  double residual(const Vec3d& p) const {
    double s = local_scale(p);
    return s > 0.0 ? std::fabs(value(p)) / s : 0.0;
  }

  /// Newton projection onto the curve within the unit sphere.
  std::optional<Vec3d> project(Vec3d p, int max_iter = 20) const {
    p = normalized(p);
    for (int it = 0; it < max_iter; ++it) {
      double v = value(p);
      Vec3d g = gradient(p);
      Vec3d gt = g - dot(g, p) * p;
      double gg = dot(gt, gt);
      if (gg == 0.0) return std::nullopt;
      Vec3d q = normalized(p - (v / gg) * gt);
      double moved = norm(q - p);
      p = q;
      if (moved < 1e-16) break;
    }
    if (residual(p) > 1e-12) return std::nullopt;
    return p;
  }

 private:
  CurveKind kind_;
  Rational k_;
  HomPoly<Rational> exact_;
  std::array<double, 10> c_{};
  double scale_ = 0.0;
};

inline PlaneCurve cubic_curve(const Rational& k) {
  return PlaneCurve(CurveKind::Cubic, k, ParamCubic(k).form().cubic());
}
inline PlaneCurve hessian_curve(const Rational& k) {
  return PlaneCurve(CurveKind::Hessian, k, hessian_polynomial(ParamCubic(k).form().cubic()));
}
inline PlaneCurve make_curve(const Rational& k, CurveKind kind) {
  return kind == CurveKind::Cubic ? cubic_curve(k) : hessian_curve(k);
}

/// B1 = (0:1:0), B2 = (1:0:0), B3 = (1:-1:0).
inline std::array<Vec3q, 3> inflexion_points() { return {Vec3q{0, 1, 0}, Vec3q{1, 0, 0}, Vec3q{1, -1, 0}}; }

/// Asymptotes x = -1/(k-1), y = -1/(k-1), x + y = k/(k-1), in that order.
inline std::array<LineQ, 3> asymptotes(const Rational& k) {
  if (k == 1) throw DegenerateParameter("asymptotes: k = 1");
  Rational c = 1 / (k - 1);
  Rational s = k / (k - 1);
  return {LineQ({1, 0, c}), LineQ({0, 1, c}), LineQ({1, 1, Rational(-s)})};
}

inline LineD tangent_line_at(const PlaneCurve& curve, const Vec3d& p, const Tolerance& tol = {}) {
  if (curve.residual(p) > std::max(tol.eps, 1e-12)) throw PreconditionError("tangent_line_at: point is not on the curve");
  Vec3d g = curve.gradient(p);
  if (norm(g) <= tol.eps * curve.coefficient_scale() * dot(p, p)) throw SingularPointError("tangent_line_at: singular point");
  return LineD(g);
}

inline LineQ tangent_line_at(const PlaneCurve& curve, const Vec3q& p) {
  if (sgn(curve.value(p)) != 0) throw PreconditionError("tangent_line_at: point is not on the curve");
  Vec3q g = curve.gradient(p);
  if (g.is_zero()) throw SingularPointError("tangent_line_at: singular point");
  return LineQ(g);
}

/// A real point of a line-curve intersection.
struct CurvePoint {
  Vec3d point;
  std::optional<Vec3q> exact;
  int multiplicity = 1;
  bool multiplicity_certain = true;
};

namespace detail {

/// Two independent vectors spanning the kernel of l.
template <Scalar T>
std::pair<Vec3<T>, Vec3<T>> line_basis(const Vec3<T>& l) {
  std::array<Vec3<T>, 3> cand{cross(l, Vec3<T>{T(1), T(0), T(0)}), cross(l, Vec3<T>{T(0), T(1), T(0)}),
                              cross(l, Vec3<T>{T(0), T(0), T(1)})};
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      if constexpr (is_exact_v<T>) {
        if (!cross(cand[a], cand[b]).is_zero()) return {cand[a], cand[b]};
      } else {
        if (norm(cross(cand[a], cand[b])) > 1e-12 * dot(l, l) * dot(l, l)) return {cand[a], cand[b]};
      }
    }
  throw PreconditionError("degenerate line");
}

}  // namespace detail

/// Real intersections of a line with a cubic, with multiplicity. Exact Sturm
/// isolation on rationals.
inline std::vector<CurvePoint> line_cubic_intersections(const LineQ& line, const HomPoly<Rational>& cubic) {
  auto [p, q] = detail::line_basis(line.c);
  std::vector<Rational> c = restrict_to_line(cubic, p, q);
  if (std::all_of(c.begin(), c.end(), [](const Rational& v) { return sgn(v) == 0; }))
    throw PreconditionError("line is a component of the cubic");
  std::vector<CurvePoint> out;
  int top_zero = 0;
  while (sgn(c[c.size() - 1 - top_zero]) == 0) ++top_zero;
  if (top_zero > 0) out.push_back({canonical_ray(to_double(q)), canonical_ray(q), top_zero, true});
  for (const RealRoot& r : real_roots(UniPoly<Rational>(c))) {
    CurvePoint cp;
    cp.multiplicity = r.multiplicity;
    if (r.exact) {
      Vec3q e = p + r.lo * q;
      cp.exact = canonical_ray(e);
      cp.point = canonical_ray(to_double(e));
    } else {
      cp.point = canonical_ray(to_double(p) + r.value * to_double(q));
    }
    out.push_back(cp);
  }
  return out;
}

/// Float variant; clustered roots are reported as one point with
/// multiplicity_certain = false.
inline std::vector<CurvePoint> line_cubic_intersections(const LineD& line, const PlaneCurve& curve,
                                                        const Tolerance& tol = {}) {
  auto [p, q] = detail::line_basis(line.c);
  p = normalized(p);
  q = normalized(q);
  HomPoly<double> f = curve.exact().convert<double>();
  std::vector<double> c = restrict_to_line(f, p, q);
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) throw PreconditionError("line is a component of the cubic");
  std::vector<CurvePoint> out;
  int top_zero = 0;
  while (top_zero < 3 && std::fabs(c[c.size() - 1 - top_zero]) <= tol.eps * scale) {
    c[c.size() - 1 - top_zero] = 0.0;
    ++top_zero;
  }
  if (top_zero > 0) out.push_back({canonical_ray(q), std::nullopt, top_zero, false});
  for (const RealRoot& r : real_roots(UniPoly<double>(c), tol))
    out.push_back({canonical_ray(p + r.value * q), std::nullopt, r.multiplicity, r.multiplicity_certain});
  return out;
}

/// Tangency points of the three asymptotes with the Hessian: the double root
/// of the Hessian restricted to each asymptote. Exact.
inline std::array<Vec3q, 3> asymptote_tangency_points(const Rational& k) {
  Regime r = regime_of(k);
  if (is_degenerate(r)) throw DegenerateParameter("asymptote tangency: degenerate parameter " + to_string(k));
  HomPoly<Rational> h = hessian_polynomial(ParamCubic(k).form().cubic());
  auto lines = asymptotes(k);
  std::array<Vec3q, 3> out;
  for (int i = 0; i < 3; ++i) {
    bool found = false;
    for (const CurvePoint& cp : line_cubic_intersections(lines[i], h)) {
      if (cp.multiplicity == 2 && cp.exact) {
        out[i] = *cp.exact;
        found = true;
      }
    }
    if (!found) throw Error("asymptote is not tangent to the Hessian");
  }
  return out;
}

/// Curve and label of a traced branch.
struct BranchId {
  CurveKind curve = CurveKind::Cubic;
  std::string label;

  friend bool operator==(const BranchId& a, const BranchId& b) { return a.curve == b.curve && a.label == b.label; }
};

/// A branch of the real curve lying in one affine region. Unbounded branches
/// run from inflexion `start` to inflexion `end` (0, 1, 2 for B1, B2, B3).
struct BranchSpec {
  BranchId id;
  AffineRegion region;
  bool closed = false;
  int start = -1, end = -1;
};

/// Whether the curve of this kind at parameter k has the three unbounded
/// branches in NegQuad / SectorE / SectorN plus an oval in the triangle.
inline bool has_oval(const Rational& k, CurveKind kind) {
  return kind == CurveKind::Cubic ? k > 1 : k < 1;
}

inline std::vector<BranchSpec> branch_specs(const Rational& k, CurveKind kind) {
  Regime r = regime_of(k);
  if (r == Regime::DegenerateCubic) throw InvalidBranch("no branches: the cubic is singular at k = 1");
  if (kind == CurveKind::Hessian && is_degenerate(r))
    throw InvalidBranch("no branches: the Hessian is singular at k = " + to_string(k));
  bool cubic = kind == CurveKind::Cubic;
  if (has_oval(k, kind)) {
    return {{{kind, cubic ? "C1" : "C2"}, AffineRegion::NegQuad, false, 0, 1},
            {{kind, cubic ? "CubicE" : "HessianE"}, AffineRegion::SectorE, false, 1, 2},
            {{kind, cubic ? "CubicN" : "HessianN"}, AffineRegion::SectorN, false, 2, 0},
            {{kind, "boundedOval"}, AffineRegion::Triangle, true, -1, -1}};
  }
  return {{{kind, cubic ? "C1" : "C2"}, AffineRegion::Far, false, 0, 1},
          {{kind, cubic ? "CubicW" : "HessianW"}, AffineRegion::EdgeW, false, 1, 2},
          {{kind, cubic ? "CubicS" : "HessianS"}, AffineRegion::EdgeS, false, 2, 0}};
}

/// Ordered samples along a branch. `rays` is a continuous path on the unit
/// sphere; endpoints of unbounded branches are inflexion rays with z = 0.
struct Polyline {
  BranchId branch;
  Rational k;
  std::vector<Vec3d> rays;
  bool closed = false;
  int start = -1, end = -1;

  std::size_t size() const { return rays.size(); }
  bool is_ideal(std::size_t i) const { return rays[i][2] == 0.0; }

  /// (x, y, 1) for affine vertices, the canonical ray for ideal ones.
  Vec3d point(std::size_t i) const {
    const Vec3d& r = rays[i];
    if (r[2] == 0.0) return canonical_ray(r);
    return {r[0] / r[2], r[1] / r[2], 1.0};
  }
  std::vector<Vec3d> points() const {
    std::vector<Vec3d> out;
    out.reserve(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) out.push_back(point(i));
    return out;
  }

  /// "# branch=<label> k=<value>" header, then x,y rows for affine vertices.
  std::string to_csv() const {
    std::ostringstream os;
    os << "# branch=" << branch.label << " k=" << to_string(k) << "\n";
    os << "# curve=" << to_string(branch.curve) << " closed=" << (closed ? "true" : "false") << "\n";
    os << "x,y\n";
    char buf[64];
    for (std::size_t i = 0; i < rays.size(); ++i) {
      if (is_ideal(i)) continue;
      Vec3d p = point(i);
      std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", p[0], p[1]);
      os << buf;
    }
    return os.str();
  }
};

namespace detail {

/// Oriented unit tangent of the curve cone on the sphere.
inline Vec3d sphere_tangent(const PlaneCurve& c, const Vec3d& p) { return normalized(cross(c.gradient(p), p)); }

/// Follows the curve from p0 along +/- tangent until it leaves the z > 0
/// hemisphere (snapping to the inflexion ray it crosses) or, if closed_ok,
/// returns to p0.
struct MarchResult {
  std::vector<Vec3d> path;
  bool closed = false;
  int inflexion = -1;
};

inline MarchResult march(const PlaneCurve& curve, const Vec3d& p0, double direction, double h0, bool closed_ok) {
  MarchResult out;
  out.path.push_back(p0);
  Vec3d p = p0;
  Vec3d t_prev = direction * sphere_tangent(curve, p0);
  double h = h0;
  double travelled = 0.0;
  const std::size_t max_steps = static_cast<std::size_t>(400.0 * M_PI / h0) + 1000;
  auto infl = inflexion_points();
  for (std::size_t step = 0; step < max_steps; ++step) {
    Vec3d t = sphere_tangent(curve, p);
    if (dot(t, t_prev) < 0) t = -t;
    auto q = curve.project(p + h * t);
    bool ok = q.has_value();
    double turn = 0.0;
    if (ok) {
      Vec3d tq = sphere_tangent(curve, *q);
      turn = std::acos(std::clamp(std::fabs(dot(tq, t)), -1.0, 1.0));
      double d = norm(*q - p);
      if (turn > 0.1 || d > 2.0 * h || d < 0.25 * h) ok = false;
    }
    if (!ok) {
      h *= 0.5;
      if (h < h0 * 1e-7) throw TraceError("trace stalled");
      continue;
    }
    if ((*q)[2] <= 0.0) {
      // Crossed the line at infinity: snap to the nearest inflexion ray.
      Vec3d mid = normalized(p + *q);
      int best = -1;
      double best_d = 1e300;
      Vec3d best_ray;
      for (int i = 0; i < 3; ++i) {
        Vec3d b = normalized(to_double(infl[i]));
        if (dot(b, mid) < 0) b = -b;
        double d = norm(b - mid);
        if (d < best_d) {
          best_d = d;
          best = i;
          best_ray = b;
        }
      }
      if (best_d > 4.0 * h0) throw TraceError("branch left the affine chart away from an inflexion");
      out.path.push_back(best_ray);
      out.inflexion = best;
      return out;
    }
    travelled += norm(*q - p);
    if (closed_ok && travelled > 4.0 * h0 && norm(*q - p0) < 1.5 * h) {
      out.closed = true;
      return out;
    }
    out.path.push_back(*q);
    t_prev = t;
    p = *q;
    if (turn < 0.03) h = std::min(h0, h * 1.5);
  }
  throw TraceError("trace did not terminate");
}

/// Symmetry axis crossing the region, as a point and direction.
inline std::pair<Vec3q, Vec3q> seed_axis(AffineRegion r) {
  switch (r) {
    case AffineRegion::Triangle:
    case AffineRegion::NegQuad:
    case AffineRegion::Far: return {Vec3q{0, 0, 1}, Vec3q{1, 1, 0}};
    case AffineRegion::SectorN:
    case AffineRegion::EdgeS: return {Vec3q{0, 1, 1}, Vec3q{1, -2, 0}};
    case AffineRegion::SectorE:
    case AffineRegion::EdgeW: return {Vec3q{1, 0, 1}, Vec3q{-2, 1, 0}};
    case AffineRegion::Boundary: break;
  }
  throw PreconditionError("no seed axis for the boundary");
}

/// Curve points on the region's symmetry axis lying inside the region.
inline std::vector<Vec3d> seeds(const PlaneCurve& curve, AffineRegion region) {
  auto [p, d] = seed_axis(region);
  std::vector<Rational> c = restrict_to_line(curve.exact(), p, d);
  std::vector<Vec3d> out;
  for (const RealRoot& r : real_roots(UniPoly<Rational>(c))) {
    Vec3d pt = to_double(p) + r.value * to_double(d);
    if (region_of(pt) != region) continue;
    auto q = curve.project(pt);
    if (q) out.push_back((*q)[2] < 0 ? -*q : *q);
  }
  return out;
}

}  // namespace detail

/// Traces a full branch (or a sub-arc split at an asymptote tangency point).
/// Sub-arc labels are "arc<X><Y>" with X, Y among B1 B2 B3 Q1 Q2 Q3 and R
/// (R names Q3 when it lies on C2, i.e. for k > 1).
Polyline trace_branch(const Rational& k, const BranchId& branch, int resolution = 512);

namespace detail {

inline std::string inflexion_name(int i) { return "B" + std::to_string(i + 1); }

inline std::string special_name(const Rational& k, int i) { return (k > 1 && i == 2) ? "R" : "Q" + std::to_string(i + 1); }

inline Polyline trace_full(const Rational& k, const BranchSpec& spec, int resolution) {
  if (resolution < 8) throw PreconditionError("resolution must be at least 8");
  PlaneCurve curve = make_curve(k, spec.id.curve);
  auto s = seeds(curve, spec.region);
  if (s.empty()) throw TraceError("no seed point found for branch " + spec.id.label);
  double h0 = M_PI / resolution;
  Polyline pl;
  pl.branch = spec.id;
  pl.k = k;
  if (spec.closed) {
    MarchResult m = march(curve, s.front(), 1.0, h0, true);
    if (!m.closed) throw TraceError("oval did not close");
    pl.rays = std::move(m.path);
    pl.closed = true;
    return pl;
  }
  MarchResult fwd = march(curve, s.front(), 1.0, h0, false);
  MarchResult bwd = march(curve, s.front(), -1.0, h0, false);
  std::vector<Vec3d> path(bwd.path.rbegin(), bwd.path.rend());
  path.insert(path.end(), fwd.path.begin() + 1, fwd.path.end());
  int a = bwd.inflexion, b = fwd.inflexion;
  if (a == spec.end && b == spec.start) {
    std::reverse(path.begin(), path.end());
    std::swap(a, b);
  }
  if (a != spec.start || b != spec.end) throw TraceError("branch " + spec.id.label + " ends at unexpected inflexions");
  pl.rays = std::move(path);
  pl.start = a;
  pl.end = b;
  return pl;
}

}  // namespace detail

inline Polyline trace_branch(const Rational& k, const BranchId& branch, int resolution) {
  auto specs = branch_specs(k, branch.curve);
  for (const auto& spec : specs)
    if (spec.id == branch) return detail::trace_full(k, spec, resolution);
  // Sub-arcs of unbounded Hessian branches, split at tangency points.
  if (branch.curve == CurveKind::Hessian && branch.label.rfind("arc", 0) == 0) {
    auto q = asymptote_tangency_points(k);
    for (const auto& spec : specs) {
      if (spec.closed) continue;
      for (int i = 0; i < 3; ++i) {
        Vec3d qi = to_double(q[i]);
        if (region_of(qi) != spec.region) continue;
        std::string s = detail::special_name(k, i);
        std::string first = "arc" + detail::inflexion_name(spec.start) + s;
        std::string second = "arc" + s + detail::inflexion_name(spec.end);
        if (branch.label != first && branch.label != second) continue;
        Polyline full = detail::trace_full(k, spec, resolution);
        Vec3d qn = normalized(qi);
        std::size_t best = 0;
        double best_d = 1e300;
        for (std::size_t n = 0; n < full.rays.size(); ++n) {
          double d = norm(full.rays[n] - qn);
          if (d < best_d) {
            best_d = d;
            best = n;
          }
        }
        Polyline pl = full;
        pl.branch = branch;
        if (branch.label == first) {
          pl.rays.assign(full.rays.begin(), full.rays.begin() + best);
          pl.rays.push_back(qn);
          pl.end = -1;
        } else {
          pl.rays.assign(1, qn);
          pl.rays.insert(pl.rays.end(), full.rays.begin() + best + 1, full.rays.end());
          pl.start = -1;
        }
        return pl;
      }
    }
  }
  throw InvalidBranch("branch " + branch.label + " does not exist for k = " + to_string(k));
}

/// Sub-arc labels available for k (split points of the unbounded Hessian branches).
inline std::vector<std::string> hessian_subarc_labels(const Rational& k) {
  std::vector<std::string> out;
  auto q = asymptote_tangency_points(k);
  for (const auto& spec : branch_specs(k, CurveKind::Hessian)) {
    if (spec.closed) continue;
    for (int i = 0; i < 3; ++i) {
      if (region_of(to_double(q[i])) != spec.region) continue;
      std::string s = detail::special_name(k, i);
      out.push_back("arc" + detail::inflexion_name(spec.start) + s);
      out.push_back("arc" + s + detail::inflexion_name(spec.end));
    }
  }
  return out;
}

/// Number of connected components of the real projective zero set of a cubic,
/// counted on an icosphere with antipodal gluing. The count is repeated one
/// level deeper and refined further until two levels agree.
inline int count_real_components(const HomPoly<Rational>& cubic, int depth = 6) {
  PlaneCurve curve(CurveKind::Cubic, Rational(0), cubic);
  int previous = -1;
  for (int d = depth; d <= 9; ++d) {
    Icosphere sphere(d);
    const auto& v = sphere.vertices();
    std::vector<double> val(v.size());
    for (std::size_t n = 0; n < v.size(); ++n) val[n] = curve.value(v[n]);
    auto positive = [&](std::size_t n) { return val[n] >= 0.0; };
    auto edges = sphere.edges();
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> slot;
    std::vector<std::size_t> crossing;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      auto [a, b] = edges[e];
      if (positive(a) == positive(b)) continue;
      slot.emplace(std::make_pair(a, b), crossing.size());
      crossing.push_back(e);
      // Smoothness spot check at the interpolated crossing.
      double t = val[a] / (val[a] - val[b]);
      Vec3d p = normalized((1 - t) * v[a] + t * v[b]);
      if (norm(curve.gradient(p)) < 1e-7 * curve.coefficient_scale()) throw SingularCurveError("curve is singular");
    }
    auto key = [](std::size_t a, std::size_t b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
    DisjointSets ds(crossing.size());
    for (const auto& f : sphere.faces()) {
      std::vector<std::size_t> hit;
      for (int e = 0; e < 3; ++e) {
        auto it = slot.find(key(f[e], f[(e + 1) % 3]));
        if (it != slot.end()) hit.push_back(it->second);
      }
      if (hit.size() == 2) ds.unite(hit[0], hit[1]);
    }
    for (std::size_t n = 0; n < crossing.size(); ++n) {
      auto [a, b] = edges[crossing[n]];
      auto it = slot.find(key(sphere.antipode(a), sphere.antipode(b)));
      if (it != slot.end()) ds.unite(n, it->second);
    }
    std::vector<std::size_t> roots;
    for (std::size_t n = 0; n < crossing.size(); ++n) roots.push_back(ds.find(n));
    std::sort(roots.begin(), roots.end());
    int count = static_cast<int>(std::unique(roots.begin(), roots.end()) - roots.begin());
    if (count == previous) return count;
    previous = count;
  }
  return previous;
}

inline int count_real_components(const ParamCubic& f, int depth = 6) {
  if (f.regime() == Regime::DegenerateCubic) throw SingularCurveError("F_k is singular at k = 1");
  return count_real_components(f.form().cubic(), depth);
}

/// Result of a tangent search; boundary_ambiguous marks a tangency within
/// tolerance of an arc endpoint.
struct TangencyResult {
  std::vector<Vec3d> points;
  bool boundary_ambiguous = false;
};

namespace detail {

/// Zeros of a continuous function along a traced polyline, refined by
/// bisection on the curve. Close pairs of zeros hiding between two vertices
/// are caught by probing local minima of |fn|. `params`, when given, receives
/// an approximate polyline parameter for each zero (vertex index plus fraction).
template <class Fn>
std::vector<Vec3d> zeros_along(const PlaneCurve& curve, const std::vector<Vec3d>& rays, bool closed, Fn fn,
                               std::vector<double>* params = nullptr) {
  std::vector<Vec3d> out;
  auto emit = [&](const Vec3d& z, double t) {
    out.push_back(z);
    if (params) params->push_back(t);
  };
  std::size_t n = rays.size();
  if (n < 2) return out;
  auto at = [&](std::size_t i) -> const Vec3d& { return rays[i % n]; };
  auto interp = [&](const Vec3d& a, const Vec3d& b, double s) {
    Vec3d m = normalized((1 - s) * a + s * b);
    auto q = curve.project(m, 8);
    return q ? *q : m;
  };
  auto bisect = [&](Vec3d a, Vec3d b) {
    double fa = fn(a);
    for (int it = 0; it < 80 && norm(a - b) > 1e-15; ++it) {
      Vec3d m = interp(a, b, 0.5);
      double fm = fn(m);
      if ((fm > 0) == (fa > 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    return interp(a, b, 0.5);
  };
  std::size_t segs = closed ? n : n - 1;
  std::vector<double> val(n);
  for (std::size_t i = 0; i < n; ++i) val[i] = fn(rays[i]);
  for (std::size_t i = 0; i < segs; ++i) {
    const Vec3d &a = at(i), &b = at(i + 1);
    double fa = val[i % n], fb = val[(i + 1) % n];
    if (fa == 0.0) {
      if (i > 0 || !closed) emit(a, double(i));
      continue;
    }
    if (fb != 0.0 && (fa > 0) != (fb > 0)) {
      emit(bisect(a, b), i + 0.5);
      continue;
    }
    // Probe for a hidden pair of sign changes when |fn| dips on this segment.
    double fm = fn(interp(a, b, 0.5));
    if (fb != 0.0 && std::fabs(fm) < std::min(std::fabs(fa), std::fabs(fb))) {
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 60; ++it) {
        double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        double f1 = fn(interp(a, b, m1)), f2 = fn(interp(a, b, m2));
        if ((f1 > 0) != (fa > 0)) {
          emit(bisect(a, interp(a, b, m1)), i + m1 / 2);
          emit(bisect(interp(a, b, m1), b), i + (1 + m1) / 2);
          break;
        }
        if ((f2 > 0) != (fa > 0)) {
          emit(bisect(a, interp(a, b, m2)), i + m2 / 2);
          emit(bisect(interp(a, b, m2), b), i + (1 + m2) / 2);
          break;
        }
        if (std::fabs(f1) < std::fabs(f2)) {
          hi = m2;
        } else {
          lo = m1;
        }
      }
    }
  }
  if (!closed && val[n - 1] == 0.0) emit(rays[n - 1], double(n - 1));
  return out;
}

}  // namespace detail

/// Points U of the arc whose tangent line passes through A, i.e. zeros of
/// grad(U) . A along the trace.
inline TangencyResult tangents_from_point(const Rational& k, const BranchId& arc, const Vec3d& a, int resolution = 1024,
                                          const Tolerance& tol = {}) {
  PlaneCurve curve = make_curve(k, arc.curve);
  if (a[2] != 0.0 && curve.residual(a) < tol.eps) throw PreconditionError("tangents_from_point: A lies on the curve");
  Polyline pl = trace_branch(k, arc, resolution);
  auto g = [&](const Vec3d& u) { return dot(curve.gradient(u), a); };
  TangencyResult out;
  for (const Vec3d& u : detail::zeros_along(curve, pl.rays, pl.closed, g)) out.points.push_back(canonical_ray(u));
  if (!pl.closed) {
    for (std::size_t i : {std::size_t(0), pl.rays.size() - 1}) {
      const Vec3d& u = pl.rays[i];
      if (std::fabs(g(u)) <= std::sqrt(tol.eps) * norm(curve.gradient(u)) * norm(a)) out.boundary_ambiguous = true;
    }
  }
  return out;
}

}  // namespace ccl
