#pragma once

#include <array>
#include <cmath>
#include <ostream>
#include <string>

#include "ccl/scalar.hpp"

namespace ccl {

/// Coordinates (x, y, z) in H^2 (x) R, or a ray representing a point of P^2(R).
template <Scalar T>
struct Vec3 {
  std::array<T, 3> c{T(0), T(0), T(0)};

  Vec3() = default;
  Vec3(T x, T y, T z) : c{std::move(x), std::move(y), std::move(z)} {}

  T& operator[](std::size_t i) { return c[i]; }
  const T& operator[](std::size_t i) const { return c[i]; }

  const T& x() const { return c[0]; }
  const T& y() const { return c[1]; }
  const T& z() const { return c[2]; }

  bool is_zero() const { return ccl::is_zero(c[0]) && ccl::is_zero(c[1]) && ccl::is_zero(c[2]); }

  friend Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {T(a.c[0] + b.c[0]), T(a.c[1] + b.c[1]), T(a.c[2] + b.c[2])};
  }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {T(a.c[0] - b.c[0]), T(a.c[1] - b.c[1]), T(a.c[2] - b.c[2])};
  }
  friend Vec3 operator-(const Vec3& a) { return {T(-a.c[0]), T(-a.c[1]), T(-a.c[2])}; }
  friend Vec3 operator*(const T& s, const Vec3& a) {
    return {T(s * a.c[0]), T(s * a.c[1]), T(s * a.c[2])};
  }
  friend Vec3 operator*(const Vec3& a, const T& s) { return s * a; }
  friend bool operator==(const Vec3& a, const Vec3& b) { return a.c == b.c; }
};

using Vec3d = Vec3<double>;
using Vec3q = Vec3<Rational>;

template <Scalar T>
T dot(const Vec3<T>& a, const Vec3<T>& b) {
  return T(a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
}

template <Scalar T>
Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
  return {T(a[1] * b[2] - a[2] * b[1]), T(a[2] * b[0] - a[0] * b[2]), T(a[0] * b[1] - a[1] * b[0])};
}

inline double norm(const Vec3d& a) { return std::sqrt(dot(a, a)); }

inline Vec3d normalized(const Vec3d& a) {
  double n = norm(a);
  return n > 0.0 ? Vec3d{a[0] / n, a[1] / n, a[2] / n} : a;
}

inline Vec3d to_double(const Vec3q& v) { return {v[0].get_d(), v[1].get_d(), v[2].get_d()}; }
inline Vec3d to_double(const Vec3d& v) { return v; }

inline Vec3q to_rational(const Vec3d& v) { return {Rational(v[0]), Rational(v[1]), Rational(v[2])}; }

template <Scalar T>
Vec3<T> convert(const Vec3q& v) {
  return {from_rational<T>(v[0]), from_rational<T>(v[1]), from_rational<T>(v[2])};
}

/// Representative of a projective point: unit length, z > 0 when z != 0,
/// otherwise first nonzero coordinate positive.
inline Vec3d canonical_ray(const Vec3d& p) {
  Vec3d u = normalized(p);
  int lead = u[2] != 0.0 ? 2 : (u[0] != 0.0 ? 0 : 1);
  if (u[lead] < 0.0) u = -u;
  return u;
}

/// Exact analogue of canonical_ray: (a, b, 1) for affine points, otherwise
/// scaled so that the first nonzero coordinate is 1.
inline Vec3q canonical_ray(const Vec3q& p) {
  if (p.is_zero()) return p;
  int lead = sgn(p[2]) != 0 ? 2 : (sgn(p[0]) != 0 ? 0 : 1);
  Rational s = p[lead];
  return {Rational(p[0] / s), Rational(p[1] / s), Rational(p[2] / s)};
}

/// Distance between the projective points represented by a and b (on S^2 mod +-1).
inline double projective_distance(const Vec3d& a, const Vec3d& b) {
  Vec3d u = normalized(a), v = normalized(b);
  return std::min(norm(u - v), norm(u + v));
}

/// Affine point (x, y, 1) as a ray.
template <Scalar T>
Vec3<T> affine(T x, T y) {
  return {std::move(x), std::move(y), T(1)};
}

inline std::string to_string(const Vec3q& v) {
  return "(" + to_string(v[0]) + "," + to_string(v[1]) + "," + to_string(v[2]) + ")";
}

template <Scalar T>
std::ostream& operator<<(std::ostream& os, const Vec3<T>& v) {
  if constexpr (is_exact_v<T>) {
    return os << to_string(v);
  } else {
    return os << "(" << v[0] << "," << v[1] << "," << v[2] << ")";
  }
}

}  // namespace ccl
