#pragma once

// The Steinian involution of the Hessian and related tangency constructions.

#include <algorithm>
#include <array>
#include <optional>

#include <Eigen/SVD>

#include "ccl/curve.hpp"
#include "ccl/forms.hpp"

namespace ccl {

namespace detail {

inline void require_smooth_hessian(const Rational& k) {
  if (is_degenerate(regime_of(k))) throw DegenerateParameter("Hessian is singular at k = " + to_string(k));
}

/// Largest nonzero column of the adjugate: the kernel of a rank-2 matrix.
template <Scalar T>
std::optional<Vec3<T>> adjugate_kernel(const SymMat3<T>& m) {
  SymMat3<T> adj = m.adjugate();
  int best = -1;
  double best_n = 0.0;
  for (int j = 0; j < 3; ++j) {
    double n = 0.0;
    for (int i = 0; i < 3; ++i) n += to_double(adj(i, j)) * to_double(adj(i, j));
    if (n > best_n) {
      best_n = n;
      best = j;
    }
  }
  if (best < 0) return std::nullopt;
  return Vec3<T>{adj(0, best), adj(1, best), adj(2, best)};
}

}  // namespace detail

/// alpha(U): the singular point of the polar conic of F at a Hessian point U,
/// i.e. the kernel of M(U). U is first projected onto the Hessian.
inline Vec3d steinian(const Rational& k, const Vec3d& u, const Tolerance& tol = {}) {
  detail::require_smooth_hessian(k);
  PlaneCurve h = hessian_curve(k);
  if (h.residual(u) > std::max(tol.eps, 1e-9)) throw PreconditionError("steinian: point is not on the Hessian");
  auto refined = h.project(u);
  Vec3d p = refined ? *refined : normalized(u);
  SymMat3d m = polar_matrix(ParamCubic(k), p);
  // Rank test on the two largest singular values.
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = m(i, j);
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(a);
  auto sv = svd.singularValues();
  if (sv[0] == 0.0 || sv[1] < 1e-6 * sv[0]) throw DegenerateSteinian("steinian: polar matrix has rank at most 1");
  auto ker = detail::adjugate_kernel(m);
  if (!ker) throw DegenerateSteinian("steinian: polar matrix has rank at most 1");
  Vec3d r = normalized(*ker);
  // Polish onto the Hessian; alpha(U) lies on it.
  auto pr = h.project(r);
  return canonical_ray(pr ? *pr : r);
}

/// Exact Steinian map for a rational point exactly on the Hessian.
inline Vec3q steinian(const Rational& k, const Vec3q& u) {
  detail::require_smooth_hessian(k);
  if (u.is_zero()) throw PreconditionError("steinian: zero vector");
  if (sgn(hessian_value(ParamCubic(k), u)) != 0) throw PreconditionError("steinian: point is not on the Hessian");
  SymMat3q m = polar_matrix(ParamCubic(k), u);
  auto ker = detail::adjugate_kernel(m);
  if (!ker) throw DegenerateSteinian("steinian: polar matrix has rank at most 1");
  return canonical_ray(*ker);
}

/// Second polar line of P: coefficients mu(P, P, e_j).
template <Scalar T>
Line<T> second_polar_line(const TrilinearForm& mu, const Vec3<T>& p) {
  Vec3<T> c = polar_line_coefficients(mu, p);
  if (c.is_zero()) throw DegeneratePolar("second polar vanishes identically");
  return Line<T>(c);
}
template <Scalar T>
Line<T> second_polar_line(const ParamCubic& f, const Vec3<T>& p) {
  return second_polar_line(f.form(), p);
}

/// Third intersection of the line UV with the Hessian. `tangent` is set when
/// the line touches the Hessian at U or V, in which case the point returned
/// is that tangency point.
template <Scalar T>
struct ThirdPoint {
  Vec3<T> point;
  bool tangent = false;
};

inline ThirdPoint<Rational> third_intersection(const Rational& k, const Vec3q& u, const Vec3q& v) {
  detail::require_smooth_hessian(k);
  HomPoly<Rational> h = hessian_polynomial(ParamCubic(k).form().cubic());
  if (sgn(h(u)) != 0 || sgn(h(v)) != 0) throw PreconditionError("third_intersection: points must lie on the Hessian");
  if (cross(u, v).is_zero()) throw PreconditionError("third_intersection: points coincide");
  // H(sU + tV) = s t (c1 s + c2 t) with c1 = grad H(U).V, c2 = grad H(V).U.
  Rational c1 = dot(h.gradient(u), v), c2 = dot(h.gradient(v), u);
  if (sgn(c1) == 0 && sgn(c2) == 0) throw PreconditionError("third_intersection: line is a component");
  return {canonical_ray(Vec3q(c2 * u - c1 * v)), sgn(c1) == 0 || sgn(c2) == 0};
}

inline ThirdPoint<double> third_intersection(const Rational& k, const Vec3d& u, const Vec3d& v, const Tolerance& tol = {}) {
  detail::require_smooth_hessian(k);
  PlaneCurve h = hessian_curve(k);
  if (h.residual(u) > std::max(tol.eps, 1e-9) || h.residual(v) > std::max(tol.eps, 1e-9))
    throw PreconditionError("third_intersection: points must lie on the Hessian");
  Vec3d un = normalized(u), vn = normalized(v);
  if (norm(cross(un, vn)) < tol.eps) throw PreconditionError("third_intersection: points coincide");
  Vec3d gu = h.gradient(un), gv = h.gradient(vn);
  double c1 = dot(gu, vn), c2 = dot(gv, un);
  bool tangent = std::fabs(c1) <= tol.eps * norm(gu) || std::fabs(c2) <= tol.eps * norm(gv);
  return {canonical_ray(c2 * un - c1 * vn), tangent};
}

/// Distinguished points of the Hessian. Q_i are exact; e_i are populated for
/// the one-component regimes. R = Q3 for k > 0, otherwise R is the midpoint
/// of the arc alpha(C2) of the bounded component and R' = alpha(R) on C2.
struct SpecialPoints {
  Vec3q Q1, Q2, Q3;
  std::optional<Vec3d> R, Rprime;
  std::optional<std::array<double, 3>> e;
  std::optional<std::array<double, 3>> kparams;  // the k_i sharing this Hessian
};

/// The three parameters k_i with the same Hessian as F_k, i.e. the real roots
/// of (4 - x^3) / (3 x^2) = k', ascending.
inline std::array<double, 3> hessian_siblings(const Rational& k) {
  Rational kp = hesse_param_dual(k);
  // x^3 + 3k' x^2 - 4 = 0.
  UniPoly<Rational> p(std::vector<Rational>{Rational(-4), Rational(0), Rational(3 * kp), Rational(1)});
  auto roots = real_roots(p);
  if (roots.size() != 3) throw DegenerateParameter("fewer than three real parameters share this Hessian");
  return {roots[0].value, roots[1].value, roots[2].value};
}

inline SpecialPoints special_points(const Rational& k) {
  detail::require_smooth_hessian(k);
  auto q = asymptote_tangency_points(k);
  SpecialPoints sp;
  sp.Q1 = q[0];
  sp.Q2 = q[1];
  sp.Q3 = q[2];
  if (k > 1) {
    sp.R = to_double(q[2]);
    return sp;
  }
  auto ks = hessian_siblings(k);
  std::array<double, 3> e;
  for (int i = 0; i < 3; ++i) e[i] = ks[i] / (ks[i] - 1.0);
  std::sort(e.begin(), e.end());
  sp.kparams = ks;
  sp.e = e;
  if (k > 0) {
    // C2 is the unbounded branch through Q3 and alpha preserves components.
    sp.R = to_double(q[2]);
    return sp;
  }
  // R is the diagonal point of the bounded component other than Q3; for
  // k < -2 the tangent x + y = k/(k-1) at Q3 is the largest e_i.
  sp.R = k > -2 ? Vec3d{e[2] / 2, e[2] / 2, 1.0} : Vec3d{e[1] / 2, e[1] / 2, 1.0};
  sp.Rprime = Vec3d{e[0] / 2, e[0] / 2, 1.0};
  return sp;
}

}  // namespace ccl
