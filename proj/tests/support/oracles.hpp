#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <random>

#include "ccl/forms.hpp"

namespace ccl::test {

/// Polar quadratic of F_k at A = (a, b, 1), from the expanded closed form.
inline Rational polar_display(const Rational& k, const Rational& a, const Rational& b, const Vec3q& d) {
  const Rational &x = d[0], &y = d[1], &z = d[2];
  Rational w = z - x - y;
  Rational c = 1 - a - b;
  return Rational(-a * x * x - b * y * y - c * w * w + k * a * y * w + k * b * x * w + k * c * x * y);
}

/// Random rational with numerator in [-n, n] and denominator in [1, d].
inline Rational random_rational(std::mt19937_64& rng, long n = 50, long d = 17) {
  std::uniform_int_distribution<long> num(-n, n), den(1, d);
  return rational(num(rng), den(rng));
}

inline Vec3q random_point(std::mt19937_64& rng) {
  return {random_rational(rng), random_rational(rng), random_rational(rng)};
}

/// Numerical second-derivative matrix of a function by central differences.
template <class F>
double fd_hessian_det(F f, const Vec3d& a, double h = 1e-3) {
  double m[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      auto shifted = [&](double si, double sj) {
        Vec3d p = a;
        p[i] += si;
        p[j] += sj;
        return f(p);
      };
      m[i][j] = (shifted(h, h) - shifted(h, -h) - shifted(-h, h) + shifted(-h, -h)) / (4 * h * h);
    }
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// F_k from the defining display.
template <class T>
T family_display(const T& k, const T& x, const T& y, const T& z) {
  T w = z - x - y;
  return T(-x * x * x - y * y * y - w * w * w + 3 * k * x * y * w);
}

/// Determinant of the matrix of second partials of F_k, differentiated by hand.
template <class T>
T hessian_display(const T& k, const T& x, const T& y, const T& z) {
  T w = z - x - y;
  T fxx = -6 * x - 6 * w - 6 * k * y, fyy = -6 * y - 6 * w - 6 * k * x, fzz = -6 * w;
  T fxy = -6 * w + 3 * k * (w - x - y), fxz = 6 * w + 3 * k * y, fyz = 6 * w + 3 * k * x;
  return T(fxx * (fyy * fzz - fyz * fyz) - fxy * (fxy * fzz - fyz * fxz) + fxz * (fxy * fyz - fyy * fxz));
}

inline Rational family_display(const Rational& k, const Vec3q& p) { return family_display(k, p[0], p[1], p[2]); }
inline Rational hessian_display(const Rational& k, const Vec3q& p) { return hessian_display(k, p[0], p[1], p[2]); }
inline double family_display(double k, const Vec3d& p) { return family_display(k, p[0], p[1], p[2]); }
inline double hessian_display(double k, const Vec3d& p) { return hessian_display(k, p[0], p[1], p[2]); }

/// Number of positive eigenvalues of the second-partials matrix at p, by
/// Descartes' rule on its characteristic polynomial (all roots are real).
inline int positive_eigen_count(const Rational& k, const Vec3q& p) {
  Rational x = p[0], y = p[1], z = p[2], w = z - x - y;
  Rational a = -6 * x - 6 * w - 6 * k * y, b = -6 * y - 6 * w - 6 * k * x, c = -6 * w;
  Rational d = -6 * w + 3 * k * (w - x - y), e = 6 * w + 3 * k * y, f = 6 * w + 3 * k * x;
  Rational tr = a + b + c;
  Rational m2 = a * b - d * d + a * c - e * e + b * c - f * f;
  Rational det = a * (b * c - f * f) - d * (d * c - f * e) + e * (d * f - b * e);
  // lambda^3 - tr lambda^2 + m2 lambda - det
  int coef[4] = {1, -sgn(tr), sgn(m2), -sgn(det)};
  int changes = 0, last = 1;
  for (int i = 1; i < 4; ++i) {
    if (coef[i] == 0) continue;
    if (coef[i] != last) ++changes;
    last = coef[i];
  }
  return changes;
}

/// Positive index membership from the display: F > 0 and exactly one positive
/// eigenvalue with a nonzero determinant.
inline bool index_member_display(const Rational& k, const Vec3q& p) {
  return family_display(k, p) > 0 && hessian_display(k, p) != 0 && positive_eigen_count(k, p) == 1;
}

/// (4 - k^3) / (3 k^2).
inline Rational dual_display(const Rational& k) { return Rational((4 - k * k * k) / (3 * k * k)); }

/// Projective distance between rays, independent of the library helper.
inline double ray_distance(const Vec3d& a, const Vec3d& b) {
  double na = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  double nb = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
  double d1 = 0, d2 = 0;
  for (int i = 0; i < 3; ++i) {
    d1 += (a[i] / na - b[i] / nb) * (a[i] / na - b[i] / nb);
    d2 += (a[i] / na + b[i] / nb) * (a[i] / na + b[i] / nb);
  }
  return std::sqrt(std::min(d1, d2));
}

}  // namespace ccl::test
