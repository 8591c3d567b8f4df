#pragma once

// Positive index cone components, the region taxonomy of probe points, arcs
// of C2 where G_A > 0, and visibility with respect to convex bodies.

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccl/curve.hpp"
#include "ccl/forms.hpp"
#include "ccl/steinian.hpp"

namespace ccl {

// ---------------------------------------------------------------------------
// Positive index cone

/// L^3 > 0 and D -> L.D^2 has signature (1, 2, 0).
inline bool positive_index_member(const TrilinearForm& mu, const Vec3q& l) {
  if (sgn(eval_cubic(mu, l)) <= 0) return false;
  return signature(polar_matrix(mu, l)) == Signature{1, 2, 0};
}
inline bool positive_index_member(const ParamCubic& f, const Vec3q& l) { return positive_index_member(f.form(), l); }

/// Float membership. Throws IndeterminateError when F(L) or an eigenvalue of
/// M(L) falls inside the tolerance band.
inline bool positive_index_member(const TrilinearForm& mu, const Vec3d& l, const Tolerance& tol = {}) {
  Vec3d u = normalized(l);
  double scale = 0.0;
  for (const Rational& v : mu.values()) scale = std::max(scale, std::fabs(to_double(v)));
  double f = eval_cubic(mu, u);
  if (std::fabs(f) <= tol.eps * scale) throw IndeterminateError("positive_index_member: F within tolerance of zero");
  if (f < 0) return false;
  Signature s = signature(polar_matrix(mu, u), tol);
  if (s.indeterminate) throw IndeterminateError("positive_index_member: signature within tolerance of degenerate");
  return s == Signature{1, 2, 0};
}
inline bool positive_index_member(const ParamCubic& f, const Vec3d& l, const Tolerance& tol = {}) {
  return positive_index_member(f.form(), l, tol);
}

enum class ConeKind { BoundedPositive, Hybrid, NegBoundedHessian };

inline const char* to_string(ConeKind c) {
  switch (c) {
    case ConeKind::BoundedPositive: return "BoundedPositive";
    case ConeKind::Hybrid: return "Hybrid";
    case ConeKind::NegBoundedHessian: return "NegBoundedHessian";
  }
  return "?";
}

/// One connected component of the positive index cone. Hybrid components are
/// numbered by the inflexion B_which that is not one of their corners, so the
/// component bounded by C1 and C2 is Hybrid 3.
struct ConeComponentDescriptor {
  ConeKind kind = ConeKind::BoundedPositive;
  int which = 0;
  std::vector<BranchId> arcs;
  std::vector<Vec3q> corners;
  Vec3q sample;

  friend bool operator==(const ConeComponentDescriptor& a, const ConeComponentDescriptor& b) {
    return a.kind == b.kind && a.which == b.which && a.arcs == b.arcs && a.corners == b.corners && a.sample == b.sample;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["kind"] = to_string(kind);
    j["which"] = which;
    j["arcs"] = nlohmann::json::array();
    for (const auto& a : arcs) j["arcs"].push_back({{"curve", to_string(a.curve)}, {"label", a.label}});
    auto vec = [](const Vec3q& v) { return nlohmann::json::array({to_string(v[0]), to_string(v[1]), to_string(v[2])}); };
    j["corners"] = nlohmann::json::array();
    for (const auto& c : corners) j["corners"].push_back(vec(c));
    j["sample"] = vec(sample);
    return j;
  }

  static ConeComponentDescriptor from_json(const nlohmann::json& j) {
    ConeComponentDescriptor d;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "BoundedPositive") {
      d.kind = ConeKind::BoundedPositive;
    } else if (kind == "Hybrid") {
      d.kind = ConeKind::Hybrid;
    } else if (kind == "NegBoundedHessian") {
      d.kind = ConeKind::NegBoundedHessian;
    } else {
      throw ParseError("unknown cone kind: " + kind);
    }
    d.which = j.at("which").get<int>();
    for (const auto& a : j.at("arcs")) {
      std::string c = a.at("curve").get<std::string>();
      d.arcs.push_back({c == "cubic" ? CurveKind::Cubic : CurveKind::Hessian, a.at("label").get<std::string>()});
    }
    auto vec = [](const nlohmann::json& v) {
      return Vec3q{parse_rational(v.at(0).get<std::string>()), parse_rational(v.at(1).get<std::string>()),
                   parse_rational(v.at(2).get<std::string>())};
    };
    for (const auto& c : j.at("corners")) d.corners.push_back(vec(c));
    d.sample = vec(j.at("sample"));
    return d;
  }
};

namespace detail {

/// Exact +-B_i nearest to a traced end ray.
inline Vec3q inflexion_ray(const Vec3d& r) {
  auto b = inflexion_points();
  for (const Vec3q& v : b) {
    Vec3d d = normalized(to_double(v));
    if (norm(r - d) < 1e-6) return v;
    if (norm(r + d) < 1e-6) return Vec3q(-v);
  }
  throw TraceError("branch end is not an inflexion ray");
}

/// A verified interior point beyond a cubic branch: walk from its seed along
/// the gradient of F until exact membership holds.
inline Vec3q hybrid_sample(const Rational& k, const BranchSpec& spec) {
  PlaneCurve c = cubic_curve(k);
  auto s = seeds(c, spec.region);
  if (s.empty()) throw TraceError("no seed on branch " + spec.id.label);
  Vec3d p = (1.0 / s.front()[2]) * s.front();
  Vec3d g = c.gradient(p);
  double gx = g[0] - p[0] * g[2], gy = g[1] - p[1] * g[2];  // affine gradient of F(x, y, 1)
  double gn = std::hypot(gx, gy);
  double scale = std::max(1.0, std::hypot(p[0], p[1]));
  ParamCubic f(k);
  for (double step : {1e-2, 5e-2, 0.2, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    Vec3d q{p[0] + step * scale * gx / gn, p[1] + step * scale * gy / gn, 1.0};
    Vec3q qq = to_rational(q);
    if (positive_index_member(f, qq)) return qq;
  }
  throw Error("no interior sample found beyond branch " + spec.id.label);
}

}  // namespace detail

/// The hybrid component whose corners are the two inflexion rays other than
/// B_which; its boundary is the positive cone on a cubic branch and the
/// negative cone on the Hessian branch with the same ends.
inline ConeComponentDescriptor hybrid_cone_spec(const Rational& k, int which = 3) {
  if (is_degenerate(regime_of(k))) throw DegenerateParameter("no cone decomposition at k = " + to_string(k));
  if (which < 1 || which > 3) throw PreconditionError("hybrid index must be 1, 2 or 3");
  int skip = which - 1;
  ConeComponentDescriptor d;
  d.kind = ConeKind::Hybrid;
  d.which = which;
  std::optional<BranchSpec> cub;
  for (const auto& s : branch_specs(k, CurveKind::Cubic))
    if (!s.closed && s.start != skip && s.end != skip) cub = s;
  std::optional<BranchSpec> hes;
  for (const auto& s : branch_specs(k, CurveKind::Hessian))
    if (!s.closed && s.start != skip && s.end != skip) hes = s;
  if (!cub || !hes) throw InvalidBranch("no branches for hybrid " + std::to_string(which));
  d.arcs = {cub->id, hes->id};
  Polyline pl = trace_branch(k, cub->id, 128);
  d.corners = {detail::inflexion_ray(pl.rays.front()), detail::inflexion_ray(pl.rays.back())};
  d.sample = detail::hybrid_sample(k, *cub);
  return d;
}

inline std::vector<ConeComponentDescriptor> enumerate_cone_components(const Rational& k) {
  Regime r = regime_of(k);
  if (is_degenerate(r)) throw DegenerateParameter("no cone decomposition at k = " + to_string(k));
  ParamCubic f(k);
  std::vector<ConeComponentDescriptor> out;
  if (r == Regime::TwoComponents) {
    ConeComponentDescriptor d;
    d.kind = ConeKind::BoundedPositive;
    d.arcs = {{CurveKind::Cubic, "boundedOval"}};
    d.sample = Vec3q{Rational(1, 3), Rational(1, 3), 1};
    out.push_back(d);
  }
  for (int w = 1; w <= 3; ++w) out.push_back(hybrid_cone_spec(k, w));
  if (r == Regime::OneComponentLow) {
    // Negated midpoint of the two diagonal points of the bounded Hessian oval.
    auto sp = special_points(k);
    Rational x = (sp.Q3[0] + Rational((*sp.R)[0])) / 2;
    ConeComponentDescriptor d;
    d.kind = ConeKind::NegBoundedHessian;
    d.arcs = {{CurveKind::Hessian, "boundedOval"}};
    d.sample = Vec3q{Rational(-x), Rational(-x), -1};
    out.push_back(d);
  }
  for (const auto& d : out)
    if (!positive_index_member(f, d.sample)) throw Error(std::string("cone sample failed verification: ") + to_string(d.kind));
  return out;
}

// ---------------------------------------------------------------------------
// Region taxonomy

enum class RegionKind { R1, R1p, R2, R2p, R3, R4, R4p, AllOfC2, NoneOfP, OnArc, SpecialB3axis, IndexOutOfScope };

inline const char* to_string(RegionKind r) {
  switch (r) {
    case RegionKind::R1: return "R1";
    case RegionKind::R1p: return "R1p";
    case RegionKind::R2: return "R2";
    case RegionKind::R2p: return "R2p";
    case RegionKind::R3: return "R3";
    case RegionKind::R4: return "R4";
    case RegionKind::R4p: return "R4p";
    case RegionKind::AllOfC2: return "AllOfC2";
    case RegionKind::NoneOfP: return "NoneOfP";
    case RegionKind::OnArc: return "OnArc";
    case RegionKind::SpecialB3axis: return "SpecialB3axis";
    case RegionKind::IndexOutOfScope: return "IndexOutOfScope";
  }
  return "?";
}

struct RegionLabel {
  RegionKind kind = RegionKind::NoneOfP;
  std::optional<BranchId> arc;  // for OnArc

  friend bool operator==(const RegionLabel& a, const RegionLabel& b) { return a.kind == b.kind && a.arc == b.arc; }
  std::string str() const {
    if (kind == RegionKind::OnArc && arc) return std::string("OnArc(") + arc->label + ")";
    return to_string(kind);
  }
};

/// Label of a probe point. `boundary` is set within tolerance of a defining
/// line or arc, with `alternative` the label across it.
struct RegionResult {
  RegionLabel label;
  bool boundary = false;
  std::optional<RegionLabel> alternative;
};

/// Number of arcs of C2 carrying G_A > 0 implied by a label, or -1 when the
/// label makes no prediction.
inline int predicted_arc_count(RegionKind r) {
  switch (r) {
    case RegionKind::R1:
    case RegionKind::R1p:
    case RegionKind::R3:
    case RegionKind::R4:
    case RegionKind::R4p:
    case RegionKind::AllOfC2: return 1;
    case RegionKind::R2:
    case RegionKind::R2p: return 2;
    case RegionKind::NoneOfP: return 0;
    default: return -1;
  }
}

/// Diagonal point of C2: Q3 for k > 0, R' for k < 0.
inline Vec3d c2_midpoint(const Rational& k) {
  auto sp = special_points(k);
  return k > 0 ? to_double(sp.Q3) : *sp.Rprime;
}

namespace detail {

struct RegionCore {
  RegionLabel label;
  double margin = std::numeric_limits<double>::infinity();  // distance to the nearest consulted boundary
};

inline BranchId hessian_branch_at(const Rational& k, double a, double b) {
  AffineRegion r = region_of(a, b);
  if (r == AffineRegion::Boundary) r = region_of(a + 1e-7, b + 2e-7);
  for (const auto& s : branch_specs(k, CurveKind::Hessian))
    if (s.region == r) return s.id;
  return {CurveKind::Hessian, "C2"};
}

/// The regime's inequality system at the affine point (a, b), before the
/// index restriction.
inline RegionCore classify_affine_raw(const Rational& k, const Rational& a, const Rational& b, const Signature& sig) {
  ParamCubic f(k);
  Vec3q aq{a, b, Rational(1)};
  Vec3d ad = to_double(aq);
  RegionCore out;
  PlaneCurve h = hessian_curve(k);
  {
    Vec3d g = h.gradient(ad);
    double gn = std::hypot(g[0], g[1]);
    if (gn > 0) out.margin = std::fabs(h.value(ad)) / gn;
  }
  if (sig.zero > 0) {
    out.label = {RegionKind::OnArc, hessian_branch_at(k, ad[0], ad[1])};
    out.margin = 0.0;
    return out;
  }
  Rational one(1);
  Rational c = one / (one - k);
  // G_A(B1) > 0 iff a(1-k) > 1, G_A(B2) > 0 iff b(1-k) > 1.
  int s1 = sgn(a * (one - k) - one), s2 = sgn(b * (one - k) - one);
  double ca = to_double(c);
  out.margin = std::min({out.margin, std::fabs(ad[0] - ca), std::fabs(ad[1] - ca)});
  // Sign of G_A at the diagonal point m of C2; it vanishes on the tangent to
  // the Hessian at alpha(m).
  int sm;
  {
    Vec3d l;
    if (k > 0) {
      Vec3q q3 = special_points(k).Q3;
      Vec3q lq = polar_line_coefficients(f.form(), q3);
      sm = sgn(dot(lq, aq));
      l = to_double(lq);
    } else {
      Vec3d m = c2_midpoint(k);
      l = polar_line_coefficients(f.form(), m);
      double v = dot(l, ad);
      sm = (v > 0) - (v < 0);
    }
    out.margin = std::min(out.margin, std::fabs(dot(l, ad)) / std::hypot(l[0], l[1]));
  }
  auto pick = [](bool first, RegionKind p, RegionKind q) { return first ? p : q; };
  auto mirror = [](RegionKind r) {
    switch (r) {
      case RegionKind::R1: return RegionKind::R1p;
      case RegionKind::R2: return RegionKind::R2p;
      case RegionKind::R4: return RegionKind::R4p;
      default: return r;
    }
  };
  if (k > 0) {
    // Two positive ends: G_A > 0 on all of C2. Two negative ends: the sign at
    // the midpoint separates a bounded arc from nothing.
    if (s1 <= 0 && s2 <= 0) {
      out.label.kind = sm > 0 ? RegionKind::R3 : RegionKind::NoneOfP;
    } else if (s1 >= 0 && s2 >= 0) {
      out.label.kind = RegionKind::AllOfC2;
    } else {
      // Exactly one positive end, B1 when s1 > 0.
      bool first = s1 > 0;
      if (sm <= 0) {
        out.label.kind = pick(first, RegionKind::R1, RegionKind::R1p);
      } else {
        // Line through A parallel to the asymptote at the positive end meets
        // two arms of a Hessian branch; beyond the arm running to B3 is R2.
        Vec3q p = first ? Vec3q{a, Rational(0), Rational(1)} : Vec3q{Rational(0), b, Rational(1)};
        Vec3q d = first ? Vec3q{0, 1, 0} : Vec3q{1, 0, 0};
        std::vector<Rational> q = restrict_to_line(h.exact(), p, d);
        Rational vertex = -q[1] / (2 * q[2]);
        Rational coord = first ? b : a;
        bool b3_side = k > 1 ? coord > vertex : coord < vertex;
        out.label.kind = b3_side ? RegionKind::R2 : RegionKind::R4;
        if (!first) out.label.kind = mirror(out.label.kind);
      }
    }
    return out;
  }
  // k < 0: the arc alpha(C2) is the arc Q1 Q2 of the bounded Hessian oval
  // through R. A sees it twice from the corner triangle cut off by x = c,
  // y = c and that arc.
  auto sp = special_points(k);
  Vec3q chord = cross(sp.Q1, sp.Q2);
  Vec3q corner{c, c, Rational(1)};
  int side = sgn(dot(chord, aq));
  bool in_corner_triangle = side != 0 && side == sgn(dot(chord, corner));
  bool low = k < -2;
  if (s1 != 0 && s2 != 0 && (s1 > 0) == (s2 > 0)) {
    bool positive_ends = s1 > 0;
    bool twice = in_corner_triangle && positive_ends == low;
    if (twice) {
      out.label.kind = positive_ends ? RegionKind::R2 : RegionKind::R3;
    } else {
      out.label.kind = positive_ends ? RegionKind::AllOfC2 : RegionKind::NoneOfP;
    }
    return out;
  }
  if (s1 <= 0 && s2 <= 0) {
    out.label.kind = RegionKind::NoneOfP;
    return out;
  }
  if (s1 >= 0 && s2 >= 0) {
    out.label.kind = RegionKind::AllOfC2;
    return out;
  }
  bool first = s1 > 0;
  out.label.kind = sm > 0 ? pick(first, RegionKind::R4, RegionKind::R4p) : pick(first, RegionKind::R1, RegionKind::R1p);
  return out;
}

/// The two extreme labels are decided by the inequalities alone; the others
/// need index (1, q) with q <= 2 at A.
inline RegionCore classify_affine(const Rational& k, const Rational& a, const Rational& b) {
  Signature sig = signature(polar_matrix(ParamCubic(k), Vec3q{a, b, Rational(1)}));
  RegionCore out = classify_affine_raw(k, a, b, sig);
  RegionKind r = out.label.kind;
  if (sig.pos != 1 && r != RegionKind::AllOfC2 && r != RegionKind::NoneOfP && r != RegionKind::OnArc)
    out.label = {RegionKind::IndexOutOfScope, std::nullopt};
  return out;
}

}  // namespace detail

/// Region of a probe class A in the closed upper half-space. The ideal rays
/// +-(-1, 1, 0) get SpecialB3axis; +-B1 and +-B2 are decided by the sign of
/// G_A at the midpoint of C2.
inline RegionResult classify_region(const Rational& k, const Vec3d& a, const Tolerance& tol = {}) {
  Regime r = regime_of(k);
  if (is_degenerate(r)) throw DegenerateParameter("no region taxonomy at k = " + to_string(k));
  if (a[2] < 0) throw PreconditionError("classify_region: probe must lie in the upper half-space");
  if (a.is_zero()) throw PreconditionError("classify_region: zero probe");
  RegionResult out;
  if (a[2] == 0) {
    Vec3d u = canonical_ray(a);
    if (norm(cross(u, Vec3d{-1, 1, 0})) < tol.eps) {
      out.label.kind = RegionKind::SpecialB3axis;
      return out;
    }
    bool b1 = norm(cross(u, Vec3d{0, 1, 0})) < tol.eps, b2 = norm(cross(u, Vec3d{1, 0, 0})) < tol.eps;
    if (!b1 && !b2) throw PreconditionError("classify_region: ideal probes other than +-B1, +-B2, +-B3 have no label");
    // G is linear in A, so the sign of G_A on the whole of C2 is that at B_i.
    Vec3q aq = to_rational(a);
    Vec3d m = c2_midpoint(k);
    double v = polar_matrix(ParamCubic(k).form(), to_double(aq)).quad(m);
    out.label.kind = v > 0 ? RegionKind::AllOfC2 : RegionKind::NoneOfP;
    return out;
  }
  Rational x(a[0] / a[2]), y(a[1] / a[2]);
  detail::RegionCore core = detail::classify_affine(k, x, y);
  out.label = core.label;
  double scale = std::max({1.0, std::fabs(x.get_d()), std::fabs(y.get_d())});
  if (core.margin <= tol.eps * scale) {
    out.boundary = true;
    double d = 8 * tol.eps * scale;
    for (auto [dx, dy] : std::array<std::pair<double, double>, 8>{
             {{d, 0}, {-d, 0}, {0, d}, {0, -d}, {d, d}, {-d, -d}, {d, -d}, {-d, d}}}) {
      RegionLabel alt = detail::classify_affine(k, Rational(x.get_d() + dx), Rational(y.get_d() + dy)).label;
      if (!(alt == out.label)) {
        out.alternative = alt;
        break;
      }
    }
  }
  return out;
}

/// Label grid over an affine window as CSV rows a,b,label,boundary.
inline std::string region_map_csv(const Rational& k, double x0, double x1, double y0, double y1, int n,
                                  const Tolerance& tol = {}) {
  if (n < 2) throw PreconditionError("region map needs n >= 2");
  std::ostringstream os;
  os << "# region map k=" << to_string(k) << " n=" << n << "\n";
  os << "a,b,label,boundary\n";
  char buf[64];
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double a = x0 + (x1 - x0) * i / (n - 1), b = y0 + (y1 - y0) * j / (n - 1);
      RegionResult r = classify_region(k, Vec3d{a, b, 1.0}, tol);
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,", a, b);
      os << buf << r.label.str() << "," << (r.boundary ? 1 : 0) << "\n";
    }
  return os.str();
}

// ---------------------------------------------------------------------------
// Arcs of C2 where G_A > 0

/// An arc of C2, given by its end points and its parameter interval on the
/// trace of C2 from B1 to B2. An end at infinity records the inflexion index.
struct ArcOnC2 {
  Vec3d start, end;
  int start_inflexion = -1, end_inflexion = -1;
  double t0 = 0.0, t1 = 0.0;

  bool bounded() const { return start_inflexion < 0 && end_inflexion < 0; }
  bool contains_inflexion(int i) const { return start_inflexion == i || end_inflexion == i; }
};

struct ArcsOnC2 {
  std::vector<ArcOnC2> arcs;
  std::vector<Vec3d> zeros;  // zeros of G_A on C2 in trace order
  bool merged = false;       // two zeros closer than the tangency tolerance

  bool full() const { return arcs.size() == 1 && arcs[0].contains_inflexion(0) && arcs[0].contains_inflexion(1); }
};

/// Trace of C2 from B1 to B2.
inline Polyline trace_c2(const Rational& k, int resolution = 2048) {
  return trace_branch(k, {CurveKind::Hessian, "C2"}, resolution);
}

inline ArcsOnC2 ga_positive_arcs_on_C2(const Polyline& c2, const Vec3d& a) {
  const Rational& k = c2.k;
  PlaneCurve h = hessian_curve(k);
  SymMat3d m = polar_matrix(ParamCubic(k).form(), normalized(a));
  auto g = [&](const Vec3d& d) { return m.quad(d); };
  std::vector<double> params;
  ArcsOnC2 out;
  out.zeros = detail::zeros_along(h, c2.rays, false, g, &params);
  for (std::size_t i = 1; i < out.zeros.size(); ++i)
    if (projective_distance(out.zeros[i], out.zeros[i - 1]) < 1e-7) out.merged = true;
  std::size_t n = c2.rays.size();
  auto point_at = [&](double t) {
    std::size_t i = std::min<std::size_t>(std::size_t(t), n - 2);
    double s = t - double(i);
    Vec3d p = normalized((1 - s) * c2.rays[i] + s * c2.rays[i + 1]);
    auto q = h.project(p, 8);
    return q ? *q : p;
  };
  // Interval boundaries: the two ends and every zero.
  std::vector<double> cuts{0.0};
  std::vector<Vec3d> pts{c2.rays.front()};
  for (std::size_t i = 0; i < params.size(); ++i) {
    cuts.push_back(params[i]);
    pts.push_back(out.zeros[i]);
  }
  cuts.push_back(double(n - 1));
  pts.push_back(c2.rays.back());
  // Each reported zero is a sign change, so interval signs alternate.
  double g0 = g(c2.rays[0]);
  if (std::fabs(g0) <= 1e-12 * m.max_abs()) g0 = g(c2.rays[1]);
  bool positive = g0 > 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i, positive = !positive) {
    if (!positive) continue;
    double lo = cuts[i], hi = cuts[i + 1];
    ArcOnC2 arc;
    arc.t0 = lo;
    arc.t1 = hi;
    arc.start = canonical_ray(pts[i]);
    arc.end = canonical_ray(pts[i + 1]);
    if (i == 0) arc.start_inflexion = c2.start;
    if (i + 2 == cuts.size()) arc.end_inflexion = c2.end;
    out.arcs.push_back(arc);
  }
  return out;
}

inline ArcsOnC2 ga_positive_arcs_on_C2(const Rational& k, const Vec3d& a, int resolution = 2048) {
  if (a[2] < 0) throw PreconditionError("ga_positive_arcs_on_C2: probe must lie in the upper half-space");
  return ga_positive_arcs_on_C2(trace_c2(k, resolution), a);
}

/// Whether an arc set has the shape a label predicts: one arc at the B1 end
/// for R1 and R4, two arcs for R2, one bounded arc for R3, none for NoneOfP,
/// the whole curve for AllOfC2. Primed labels swap B1 and B2.
inline bool arcs_match_label(RegionKind r, const ArcsOnC2& arcs) {
  const auto& v = arcs.arcs;
  switch (r) {
    case RegionKind::R1:
    case RegionKind::R4: return v.size() == 1 && v[0].contains_inflexion(0) && !v[0].contains_inflexion(1);
    case RegionKind::R1p:
    case RegionKind::R4p: return v.size() == 1 && v[0].contains_inflexion(1) && !v[0].contains_inflexion(0);
    case RegionKind::R2:
    case RegionKind::R2p: return v.size() == 2;
    case RegionKind::R3: return v.size() == 1 && v[0].bounded();
    case RegionKind::NoneOfP: return v.empty();
    case RegionKind::AllOfC2: return arcs.full();
    default: return true;
  }
}

// ---------------------------------------------------------------------------
// Components of V2 where G_A > 0

struct V2Components {
  int count = 0;
  bool convex = true;  // midpoint spot-check passed for every component
};

/// V2 is the convex region bounded by C2 on which H < 0. It is gridded in the
/// chart D = (p, 1 - p, s q), p in [0, 1], q in (0, qmax], s = +1 when C2 lies
/// in the far region and -1 in the negative quadrant; q = 0 is the segment at
/// infinity between B2 and B1 and q = qmax the tangent to C2 at its midpoint.
inline V2Components components_in_V2(const Rational& k, const Vec3d& a, int n = 200) {
  if (is_degenerate(regime_of(k))) throw DegenerateParameter("no V2 at k = " + to_string(k));
  if (n < 4) throw PreconditionError("components_in_V2 needs n >= 4");
  ParamCubic f(k);
  Signature sig = signature(polar_matrix(f, to_rational(a)));
  if (sig.pos != 1) throw PreconditionError("components_in_V2: probe index must be (1, q) with q <= 2");
  PlaneCurve h = hessian_curve(k);
  Vec3d mid = c2_midpoint(k);
  double s = mid[0] + mid[1] > 0 ? 1.0 : -1.0;
  double qmax = 1.0 / std::fabs((mid[0] + mid[1]) / mid[2]);
  SymMat3d m = polar_matrix(f.form(), normalized(a));
  auto chart = [&](int i, int j) {
    double p = (i + 0.5) / n, q = qmax * (j + 0.5) / n;
    return Vec3d{p, 1 - p, s * q};
  };
  // H at an affine representative, i.e. H(D) times the sign of D_z.
  auto h_aff = [&](const Vec3d& d) { return h.value(d) * s; };
  double ref = h_aff(Vec3d{0.5, 0.5, s * qmax / 2});
  std::vector<int> cell(std::size_t(n) * n, -1);
  auto at = [&](int i, int j) -> int& { return cell[std::size_t(j) * n + i]; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      Vec3d d = chart(i, j);
      bool in_v2 = (h_aff(d) > 0) == (ref > 0);
      at(i, j) = (in_v2 && m.quad(d) > 0) ? 0 : -1;
    }
  V2Components out;
  std::vector<std::vector<std::pair<int, int>>> comps;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (at(i, j) != 0) continue;
      int id = int(comps.size()) + 1;
      comps.emplace_back();
      std::vector<std::pair<int, int>> stack{{i, j}};
      at(i, j) = id;
      while (!stack.empty()) {
        auto [ci, cj] = stack.back();
        stack.pop_back();
        comps.back().push_back({ci, cj});
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int e = 0; e < 4; ++e) {
          int ni = ci + di[e], nj = cj + dj[e];
          if (ni < 0 || nj < 0 || ni >= n || nj >= n || at(ni, nj) != 0) continue;
          at(ni, nj) = id;
          stack.push_back({ni, nj});
        }
      }
    }
  out.count = int(comps.size());
  std::mt19937 rng(12345);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& cells = comps[c];
    std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
    int id = int(c) + 1;
    for (int t = 0; t < 200 && cells.size() > 1; ++t) {
      auto [i1, j1] = cells[pick(rng)];
      auto [i2, j2] = cells[pick(rng)];
      int mi = (i1 + i2) / 2, mj = (j1 + j2) / 2;
      bool ok = false;
      for (int di = -1; di <= 1 && !ok; ++di)
        for (int dj = -1; dj <= 1 && !ok; ++dj) {
          int ni = mi + di, nj = mj + dj;
          if (ni >= 0 && nj >= 0 && ni < n && nj < n && at(ni, nj) == id) ok = true;
        }
      if (!ok) out.convex = false;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Convex bodies and visibility

/// A convex region of the affine plane given by a boundary polyline of
/// affine points (x, y, 1). Open polylines stand for unbounded bodies whose
/// ends run off to infinity. `inside` decides open-interior membership.
struct ConvexBody {
  std::vector<Vec3d> boundary;
  bool closed = true;
  std::function<bool(const Vec3d&)> inside;
  int orientation = 1;  // +1 when the interior lies to the left of the boundary direction

  std::size_t edge_count() const { return closed ? boundary.size() : boundary.size() - 1; }
  const Vec3d& vertex(std::size_t i) const { return boundary[i % boundary.size()]; }

  bool contains(const Vec3d& p) const { return inside(Vec3d{p[0] / p[2], p[1] / p[2], 1.0}); }

  /// Cross products of consecutive edges all have the orientation's sign.
  bool is_convex(double eps = 1e-12) const {
    std::size_t n = boundary.size();
    std::size_t turns = closed ? n : n - 2;
    for (std::size_t i = 0; i < turns; ++i) {
      Vec3d a = vertex(i), b = vertex(i + 1), c = vertex(i + 2);
      double cr = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
      double scale = std::hypot(b[0] - a[0], b[1] - a[1]) * std::hypot(c[0] - b[0], c[1] - b[1]);
      if (cr * orientation < -eps * scale) return false;
    }
    return true;
  }

  /// Closed polygon; orientation from the signed area, interior by edge tests.
  static ConvexBody polygon(std::vector<Vec3d> pts) {
    if (pts.size() < 3) throw PreconditionError("polygon needs at least three vertices");
    ConvexBody b;
    b.boundary = std::move(pts);
    double area = 0;
    for (std::size_t i = 0; i < b.boundary.size(); ++i) {
      const Vec3d &p = b.boundary[i], &q = b.boundary[(i + 1) % b.boundary.size()];
      area += p[0] * q[1] - p[1] * q[0];
    }
    b.orientation = area > 0 ? 1 : -1;
    std::vector<Vec3d> v = b.boundary;
    int o = b.orientation;
    b.inside = [v, o](const Vec3d& p) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec3d &a = v[i], &c = v[(i + 1) % v.size()];
        double cr = (c[0] - a[0]) * (p[1] - a[1]) - (c[1] - a[1]) * (p[0] - a[0]);
        if (cr * o <= 0) return false;
      }
      return true;
    };
    return b;
  }

  /// Regular n-gon inscribed in an ellipse.
  static ConvexBody ellipse(double cx, double cy, double rx, double ry, double theta, int n) {
    if (n < 3 || rx <= 0 || ry <= 0) throw PreconditionError("ellipse needs n >= 3 and positive radii");
    std::vector<Vec3d> pts;
    for (int i = 0; i < n; ++i) {
      double t = 2 * M_PI * i / n;
      double x = rx * std::cos(t), y = ry * std::sin(t);
      pts.push_back({cx + x * std::cos(theta) - y * std::sin(theta), cy + x * std::sin(theta) + y * std::cos(theta), 1.0});
    }
    return polygon(std::move(pts));
  }
};

namespace detail {

/// Body bounded by a traced branch. `sign` is the sign of the curve on the
/// interior; points must also lie in the branch's affine region.
inline ConvexBody branch_body(const Rational& k, const BranchId& id, int sign, int resolution) {
  Polyline pl = trace_branch(k, id, resolution);
  PlaneCurve c = make_curve(k, id.curve);
  ConvexBody b;
  b.closed = pl.closed;
  for (std::size_t i = 0; i < pl.size(); ++i)
    if (!pl.is_ideal(i)) b.boundary.push_back(pl.point(i));
  if (b.boundary.size() < 3) throw TraceError("branch too short for a body");
  AffineRegion reg = AffineRegion::Boundary;
  for (const auto& s : branch_specs(k, id.curve))
    if (s.id == id) reg = s.region;
  b.inside = [c, reg, sign](const Vec3d& p) {
    if (region_of(p[0], p[1]) != reg) return false;
    return c.value(Vec3d{p[0], p[1], 1.0}) * sign > 0;
  };
  // Orientation from a point just inside the middle of the boundary.
  std::size_t i = b.boundary.size() / 2;
  Vec3d p = b.boundary[i], q = b.boundary[i + 1];
  Vec3d mid = 0.5 * (p + q);
  double ex = q[0] - p[0], ey = q[1] - p[1];
  double len = std::hypot(ex, ey);
  Vec3d left{mid[0] - 1e-4 * ey / len, mid[1] + 1e-4 * ex / len, 1.0};
  b.orientation = b.inside(left) ? 1 : -1;
  return b;
}

inline Rational orient(const Vec3q& a, const Vec3q& b, const Vec3q& p) {
  return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
}

}  // namespace detail

/// The bounded oval of F_k (k > 1), where F > 0.
inline ConvexBody oval_body(const Rational& k, int resolution = 1024) {
  if (!(k > 1)) throw PreconditionError("oval_body: the cubic has an oval only for k > 1");
  return detail::branch_body(k, {CurveKind::Cubic, "boundedOval"}, 1, resolution);
}

/// V1: the region beyond C1 where F > 0.
inline ConvexBody v1_body(const Rational& k, int resolution = 1024) {
  return detail::branch_body(k, {CurveKind::Cubic, "C1"}, 1, resolution);
}

/// V2: the region beyond C2 where H < 0.
inline ConvexBody v2_body(const Rational& k, int resolution = 1024) {
  Vec3d m = c2_midpoint(k);
  PlaneCurve h = hessian_curve(k);
  // Sign of H just beyond the midpoint of C2, away from the origin.
  Vec3d beyond{1.5 * m[0] / m[2], 1.5 * m[1] / m[2], 1.0};
  int sign = h.value(beyond) > 0 ? 1 : -1;
  return detail::branch_body(k, {CurveKind::Hessian, "C2"}, sign, resolution);
}

/// Whether D on the boundary of V is visible from A: the segment AD misses the
/// interior. With exact orientation tests on the polyline, D is hidden iff A
/// lies strictly on the inner side of every boundary edge through D.
inline bool visible(const ConvexBody& v, const Vec3d& a, const Vec3d& d, const Tolerance& tol = {}) {
  Vec3d A{a[0] / a[2], a[1] / a[2], 1.0}, D{d[0] / d[2], d[1] / d[2], 1.0};
  if (v.inside(A)) throw PreconditionError("visible: observer lies inside the body");
  if (norm(A - D) == 0.0) return true;
  // Locate D on the polyline.
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity(), best_s = 0;
  double diam = 0;
  for (const Vec3d& p : v.boundary) diam = std::max(diam, std::hypot(p[0] - v.boundary[0][0], p[1] - v.boundary[0][1]));
  for (std::size_t i = 0; i < v.edge_count(); ++i) {
    const Vec3d &p = v.vertex(i), &q = v.vertex(i + 1);
    double ex = q[0] - p[0], ey = q[1] - p[1];
    double len2 = ex * ex + ey * ey;
    double s = len2 > 0 ? std::clamp(((D[0] - p[0]) * ex + (D[1] - p[1]) * ey) / len2, 0.0, 1.0) : 0.0;
    double dist = std::hypot(p[0] + s * ex - D[0], p[1] + s * ey - D[1]);
    if (dist < best_d) {
      best_d = dist;
      best = i;
      best_s = s;
    }
  }
  double edge = std::hypot(v.vertex(best + 1)[0] - v.vertex(best)[0], v.vertex(best + 1)[1] - v.vertex(best)[1]);
  if (best_d > std::max(tol.eps * std::max(1.0, diam), 0.25 * edge))
    throw PreconditionError("visible: D is not on the boundary");
  std::vector<std::size_t> edges;
  double snap = 1e-9;
  if (best_s <= snap) {
    if (v.closed || best > 0) edges.push_back(v.closed ? (best + v.edge_count() - 1) % v.edge_count() : best - 1);
    edges.push_back(best);
  } else if (best_s >= 1 - snap) {
    edges.push_back(best);
    if (v.closed || best + 1 < v.edge_count()) edges.push_back((best + 1) % v.edge_count());
  } else {
    edges.push_back(best);
  }
  Vec3q aq = to_rational(A);
  for (std::size_t e : edges) {
    Vec3q p = to_rational(v.vertex(e)), q = to_rational(v.vertex(e + 1));
    if (sgn(detail::orient(p, q, aq)) * v.orientation <= 0) return true;
  }
  return false;
}

/// Hull containment on a closed body: W is the union of boundary edges hidden from
/// every observer; every sampled interior point must lie in the closed convex
/// hull of W and the observers.
inline bool hull_containment_verify(const ConvexBody& v, const std::vector<Vec3d>& xs, int samples, unsigned seed = 1) {
  if (!v.closed) throw PreconditionError("hull_containment_verify: body must be bounded");
  std::vector<Vec3q> xq;
  for (const Vec3d& x : xs) {
    Vec3d p{x[0] / x[2], x[1] / x[2], 1.0};
    if (v.inside(p)) throw PreconditionError("hull_containment_verify: observer inside the body");
    xq.push_back(to_rational(p));
  }
  std::size_t n = v.boundary.size();
  std::vector<Vec3q> bq;
  for (const Vec3d& p : v.boundary) bq.push_back(to_rational(p));
  std::vector<std::array<double, 2>> pts;
  std::vector<bool> taken(n, false);
  for (std::size_t e = 0; e < n; ++e) {
    bool hidden = true;
    for (const Vec3q& x : xq)
      if (sgn(detail::orient(bq[e], bq[(e + 1) % n], x)) * v.orientation <= 0) hidden = false;
    if (hidden) taken[e] = taken[(e + 1) % n] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (taken[i]) pts.push_back({v.boundary[i][0], v.boundary[i][1]});
  for (const Vec3d& x : xs) pts.push_back({x[0] / x[2], x[1] / x[2]});
  if (pts.size() < 3) return samples == 0;
  // Monotone chain hull, counter-clockwise.
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  auto cross2 = [](const std::array<double, 2>& o, const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<std::array<double, 2>> hull(2 * pts.size());
  std::size_t h = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (h >= 2 && cross2(hull[h - 2], hull[h - 1], pts[i]) <= 0) --h;
    hull[h++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = h + 1; i-- > 0;) {
    while (h >= t && cross2(hull[h - 2], hull[h - 1], pts[i]) <= 0) --h;
    hull[h++] = pts[i];
  }
  hull.resize(h - 1);
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (const Vec3d& p : v.boundary) {
    lo_x = std::min(lo_x, p[0]);
    hi_x = std::max(hi_x, p[0]);
    lo_y = std::min(lo_y, p[1]);
    hi_y = std::max(hi_y, p[1]);
  }
  double slack = 1e-12 * std::max({1.0, hi_x - lo_x, hi_y - lo_y});
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ux(lo_x, hi_x), uy(lo_y, hi_y);
  int done = 0;
  for (long tries = 0; done < samples && tries < 1000L * samples + 1000; ++tries) {
    Vec3d p{ux(rng), uy(rng), 1.0};
    if (!v.inside(p)) continue;
    ++done;
    std::array<double, 2> q{p[0], p[1]};
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const auto &a = hull[i], &b = hull[(i + 1) % hull.size()];
      double len = std::hypot(b[0] - a[0], b[1] - a[1]);
      if (cross2(a, b, q) < -slack * len) return false;
    }
  }
  return done == samples;
}

}  // namespace ccl
