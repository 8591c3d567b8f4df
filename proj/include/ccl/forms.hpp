#pragma once

// Cubic forms, polar quadratics, Hessians and signatures.

#include <Eigen/Eigenvalues>

#include <array>
#include <sstream>
#include <string>
#include <vector>

#include "ccl/polynomial.hpp"
#include "ccl/scalar.hpp"
#include "ccl/vec3.hpp"

namespace ccl {

/// Symmetric 3x3 matrix stored as m11 m12 m13 m22 m23 m33.
template <Scalar T>
struct SymMat3 {
  std::array<T, 6> m{T(0), T(0), T(0), T(0), T(0), T(0)};

  static constexpr std::size_t slot(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return i == 0 ? j : (i == 1 ? 2 + j : 5);
  }
  T& operator()(std::size_t i, std::size_t j) { return m[slot(i, j)]; }
  const T& operator()(std::size_t i, std::size_t j) const { return m[slot(i, j)]; }

  T trace() const { return T(m[0] + m[3] + m[5]); }
  /// Sum of principal 2x2 minors.
  T minor_sum() const {
    const auto& a = *this;
    return T(a(0, 0) * a(1, 1) - a(0, 1) * a(0, 1) + a(0, 0) * a(2, 2) - a(0, 2) * a(0, 2) + a(1, 1) * a(2, 2) -
             a(1, 2) * a(1, 2));
  }
  T det() const {
    const auto& a = *this;
    return T(a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(1, 2)) - a(0, 1) * (a(0, 1) * a(2, 2) - a(1, 2) * a(0, 2)) +
             a(0, 2) * (a(0, 1) * a(1, 2) - a(1, 1) * a(0, 2)));
  }
  Vec3<T> apply(const Vec3<T>& d) const {
    const auto& a = *this;
    return {T(a(0, 0) * d[0] + a(0, 1) * d[1] + a(0, 2) * d[2]), T(a(0, 1) * d[0] + a(1, 1) * d[1] + a(1, 2) * d[2]),
            T(a(0, 2) * d[0] + a(1, 2) * d[1] + a(2, 2) * d[2])};
  }
  T quad(const Vec3<T>& d) const { return dot(d, apply(d)); }
  /// Adjugate (classical adjoint); symmetric for symmetric input.
  SymMat3 adjugate() const {
    const auto& a = *this;
    SymMat3 r;
    r(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(1, 2);
    r(0, 1) = a(0, 2) * a(1, 2) - a(0, 1) * a(2, 2);
    r(0, 2) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
    r(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(0, 2);
    r(1, 2) = a(0, 1) * a(0, 2) - a(0, 0) * a(1, 2);
    r(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(0, 1);
    return r;
  }
  double max_abs() const {
    double s = 0.0;
    for (const T& v : m) s = std::max(s, std::fabs(to_double(v)));
    return s;
  }
  friend bool operator==(const SymMat3& a, const SymMat3& b) { return a.m == b.m; }
};

using SymMat3d = SymMat3<double>;
using SymMat3q = SymMat3<Rational>;

/// Inertia triple. `indeterminate` is set by the float path when an
/// eigenvalue fell inside the tolerance band; it does not take part in ==.
struct Signature {
  int pos = 0, neg = 0, zero = 0;
  bool indeterminate = false;

  friend bool operator==(const Signature& a, const Signature& b) {
    return a.pos == b.pos && a.neg == b.neg && a.zero == b.zero;
  }
  std::string str() const {
    return "(" + std::to_string(pos) + "," + std::to_string(neg) + "," + std::to_string(zero) + ")";
  }
};

inline std::ostream& operator<<(std::ostream& os, const Signature& s) { return os << s.str(); }

/// Exact inertia from the characteristic polynomial
/// p(t) = t^3 - tr t^2 + c2 t - det. Its roots are real, so Descartes' rule of
/// signs is exact: positive roots = sign changes of p(t), negative roots =
/// sign changes of p(-t), zero roots = number of vanishing trailing coefficients.
inline Signature signature(const SymMat3q& m) {
  std::array<Rational, 4> c{Rational(-m.det()), m.minor_sum(), Rational(-m.trace()), Rational(1)};
  int zero = 0;
  while (zero < 3 && sgn(c[zero]) == 0) ++zero;
  auto changes = [](const std::array<int, 4>& s) {
    int n = 0, last = 0;
    for (int v : s) {
      if (v == 0) continue;
      if (last != 0 && v != last) ++n;
      last = v;
    }
    return n;
  };
  std::array<int, 4> sp{}, sn{};
  for (int i = 0; i < 4; ++i) {
    sp[i] = sgn(c[i]);
    sn[i] = (i % 2 == 1) ? -sp[i] : sp[i];
  }
  Signature s;
  s.pos = changes(sp);
  s.neg = changes(sn);
  s.zero = zero;
  return s;
}

/// Float inertia by symmetric eigen-decomposition. Eigenvalues with
/// |lambda| <= eps * max|lambda| count as zero and set `indeterminate`.
inline Signature signature(const SymMat3d& m, const Tolerance& tol = {}) {
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = m(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(a, Eigen::EigenvaluesOnly);
  Eigen::Vector3d ev = es.eigenvalues();
  double scale = ev.cwiseAbs().maxCoeff();
  Signature s;
  for (int i = 0; i < 3; ++i) {
    if (scale == 0.0 || ev[i] == 0.0) {
      ++s.zero;
    } else if (std::fabs(ev[i]) <= tol.eps * scale) {
      ++s.zero;
      s.indeterminate = true;
    } else if (ev[i] > 0.0) {
      ++s.pos;
    } else {
      ++s.neg;
    }
  }
  return s;
}

/// Symmetric trilinear form on Z^3 (or Q^3). mu values, not polynomial
/// coefficients, are stored, in the order
/// 111 112 113 122 123 133 222 223 233 333.
class TrilinearForm {
 public:
  TrilinearForm() { refresh(); }
  explicit TrilinearForm(const std::array<Rational, 10>& mu) : mu_(mu) { refresh(); }

  static constexpr std::array<std::array<int, 3>, 10> kIndex{{{0, 0, 0},
                                                               {0, 0, 1},
                                                               {0, 0, 2},
                                                               {0, 1, 1},
                                                               {0, 1, 2},
                                                               {0, 2, 2},
                                                               {1, 1, 1},
                                                               {1, 1, 2},
                                                               {1, 2, 2},
                                                               {2, 2, 2}}};

  static std::size_t slot(int i, int j, int k) {
    std::array<int, 3> s{i, j, k};
    std::sort(s.begin(), s.end());
    for (std::size_t n = 0; n < kIndex.size(); ++n)
      if (kIndex[n] == s) return n;
    return 0;
  }

  const Rational& mu(int i, int j, int k) const { return mu_[slot(i, j, k)]; }
  const std::array<Rational, 10>& values() const { return mu_; }
  bool integral() const { return integral_; }

  /// mu(a, b, c) summed over all ordered index triples.
  template <Scalar T>
  T operator()(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c) const {
    T acc(0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) acc += coef<T>(i, j, k) * a[i] * b[j] * c[k];
    return acc;
  }

  /// The cubic polynomial D -> mu(D, D, D).
  HomPoly<Rational> cubic() const {
    HomPoly<Rational> p(3);
    for (std::size_t n = 0; n < 10; ++n) {
      auto [i, j, k] = kIndex[n];
      int e[3] = {0, 0, 0};
      ++e[i];
      ++e[j];
      ++e[k];
      // Number of ordered triples with this multiset: 1, 3 or 6.
      int mult = (i == j && j == k) ? 1 : ((i == j || j == k) ? 3 : 6);
      p.coeff(e[0], e[1], e[2]) += mult * mu_[n];
    }
    return p;
  }

  TrilinearForm scaled(const Rational& s) const {
    std::array<Rational, 10> out;
    for (std::size_t n = 0; n < 10; ++n) out[n] = s * mu_[n];
    return TrilinearForm(out);
  }

  bool is_zero() const {
    return std::all_of(mu_.begin(), mu_.end(), [](const Rational& q) { return sgn(q) == 0; });
  }

  friend bool operator==(const TrilinearForm& a, const TrilinearForm& b) { return a.mu_ == b.mu_; }

  /// mu_ijk in the requested scalar type, from a cached table.
  template <Scalar T>
  const T& coef(int i, int j, int k) const {
    if constexpr (is_exact_v<T>) {
      return full_q_[i * 9 + j * 3 + k];
    } else {
      return full_d_[i * 9 + j * 3 + k];
    }
  }

 private:
  void refresh() {
    integral_ = true;
    for (auto& q : mu_) {
      q.canonicalize();
      if (!is_integer(q)) integral_ = false;
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          full_q_[i * 9 + j * 3 + k] = mu_[slot(i, j, k)];
          full_d_[i * 9 + j * 3 + k] = mu_[slot(i, j, k)].get_d();
        }
  }

  std::array<Rational, 10> mu_{};
  std::array<Rational, 27> full_q_{};
  std::array<double, 27> full_d_{};
  bool integral_ = true;
};

/// Builds mu from a cubic polynomial by dividing out the multinomial factors.
/// With require_integral, non-integral mu values raise IntegralityError.
inline TrilinearForm trilinear_from_coeffs(const HomPoly<Rational>& cubic, bool require_integral = false) {
  if (cubic.degree() != 3) throw PreconditionError("trilinear_from_coeffs needs a cubic");
  std::array<Rational, 10> mu;
  std::vector<std::string> bad;
  for (std::size_t n = 0; n < 10; ++n) {
    auto [i, j, k] = TrilinearForm::kIndex[n];
    int e[3] = {0, 0, 0};
    ++e[i];
    ++e[j];
    ++e[k];
    int mult = (i == j && j == k) ? 1 : ((i == j || j == k) ? 3 : 6);
    mu[n] = cubic.coeff(e[0], e[1], e[2]) / mult;
    mu[n].canonicalize();
    if (!is_integer(mu[n]))
      bad.push_back("mu" + std::to_string(i + 1) + std::to_string(j + 1) + std::to_string(k + 1) + "=" +
                    to_string(mu[n]));
  }
  if (require_integral && !bad.empty()) {
    std::string msg = "non-integral trilinear form:";
    for (const auto& b : bad) msg += " " + b;
    throw IntegralityError(msg);
  }
  return TrilinearForm(mu);
}

enum class Regime {
  TwoComponents,
  OneComponentHigh,
  OneComponentMid,
  OneComponentLow,
  DegenerateCubic,
  DegenerateHessianFermat,
  DegenerateHessianLines
};

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::TwoComponents: return "TwoComponents";
    case Regime::OneComponentHigh: return "OneComponentHigh";
    case Regime::OneComponentMid: return "OneComponentMid";
    case Regime::OneComponentLow: return "OneComponentLow";
    case Regime::DegenerateCubic: return "DegenerateCubic";
    case Regime::DegenerateHessianFermat: return "DegenerateHessianFermat";
    case Regime::DegenerateHessianLines: return "DegenerateHessianLines";
  }
  return "?";
}

inline Regime regime_of(const Rational& k) {
  if (k > 1) return Regime::TwoComponents;
  if (k == 1) return Regime::DegenerateCubic;
  if (k > 0) return Regime::OneComponentHigh;
  if (k == 0) return Regime::DegenerateHessianFermat;
  if (k > -2) return Regime::OneComponentMid;
  if (k == -2) return Regime::DegenerateHessianLines;
  return Regime::OneComponentLow;
}

inline bool is_degenerate(Regime r) {
  return r == Regime::DegenerateCubic || r == Regime::DegenerateHessianFermat || r == Regime::DegenerateHessianLines;
}

/// The family F_k = -x^3 - y^3 - (z-x-y)^3 + 3k xy(z-x-y).
struct ParamCubic {
  Rational k;

  ParamCubic() = default;
  explicit ParamCubic(Rational kk) : k(std::move(kk)) { k.canonicalize(); }

  TrilinearForm form() const {
    Rational one(1), half(1, 2);
    // 111 112 113 122 123 133 222 223 233 333
    return TrilinearForm({Rational(0), Rational(one - k), Rational(-1), Rational(one - k), Rational((k - 2) * half),
                          Rational(1), Rational(0), Rational(-1), Rational(1), Rational(-1)});
  }

  /// Direct expansion of the defining display, independent of form().
  template <Scalar T>
  T value(const Vec3<T>& d) const {
    T kk = from_rational<T>(k);
    T w = d[2] - d[0] - d[1];
    return T(-d[0] * d[0] * d[0] - d[1] * d[1] * d[1] - w * w * w + 3 * kk * d[0] * d[1] * w);
  }

  Regime regime() const { return regime_of(k); }
};

template <Scalar T>
T eval_cubic(const TrilinearForm& mu, const Vec3<T>& d) {
  return mu(d, d, d);
}
template <Scalar T>
T eval_cubic(const ParamCubic& f, const Vec3<T>& d) {
  return f.value(d);
}

/// M(A)_ij = mu(A, e_i, e_j).
template <Scalar T>
SymMat3<T> polar_matrix(const TrilinearForm& mu, const Vec3<T>& a) {
  SymMat3<T> m;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      T acc(0);
      for (int k = 0; k < 3; ++k) acc += mu.coef<T>(i, j, k) * a[k];
      m(i, j) = acc;
    }
  return m;
}
template <Scalar T>
SymMat3<T> polar_matrix(const ParamCubic& f, const Vec3<T>& a) {
  return polar_matrix(f.form(), a);
}

/// G_A(D) = mu(A, D, D).
template <Scalar T>
T eval_polar_quadratic(const TrilinearForm& mu, const Vec3<T>& a, const Vec3<T>& d) {
  return mu(a, d, d);
}
template <Scalar T>
T eval_polar_quadratic(const ParamCubic& f, const Vec3<T>& a, const Vec3<T>& d) {
  return polar_matrix(f, a).quad(d);
}

/// Coefficients mu(P, P, e_j) of the second polar line of P.
template <Scalar T>
Vec3<T> polar_line_coefficients(const TrilinearForm& mu, const Vec3<T>& p) {
  return polar_matrix(mu, p).apply(p);
}

/// Determinant of the matrix of second partial derivatives of the cubic at A,
/// computed by differentiating the polynomial.
template <Scalar T>
T hessian_value(const HomPoly<Rational>& cubic, const Vec3<T>& a) {
  std::array<std::array<T, 3>, 3> h;
  for (int i = 0; i < 3; ++i) {
    HomPoly<Rational> di = cubic.partial(i);
    for (int j = i; j < 3; ++j) {
      HomPoly<T> dij = di.partial(j).template convert<T>();
      h[i][j] = h[j][i] = dij(a);
    }
  }
  return T(h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1]) - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0]) +
           h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]));
}
template <Scalar T>
T hessian_value(const TrilinearForm& mu, const Vec3<T>& a) {
  return hessian_value(mu.cubic(), a);
}
template <Scalar T>
T hessian_value(const ParamCubic& f, const Vec3<T>& a) {
  return hessian_value(f.form().cubic(), a);
}

/// The Hessian as a cubic polynomial: det of the matrix of linear second partials.
inline HomPoly<Rational> hessian_polynomial(const HomPoly<Rational>& cubic) {
  std::array<std::array<HomPoly<Rational>, 3>, 3> h;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h[i][j] = cubic.partial(i).partial(j);
  return h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1]) - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0]) +
         h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);
}

/// k' = (4 - k^3) / (3 k^2).
inline Rational hesse_param_dual(const Rational& k) {
  if (sgn(k) == 0) throw DegenerateParameter("hesse_param_dual: k = 0");
  Rational r = (4 - k * k * k) / (3 * k * k);
  r.canonicalize();
  return r;
}

}  // namespace ccl
