#pragma once

// Homogeneous ternary polynomials and univariate root isolation.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <vector>

#include "ccl/scalar.hpp"
#include "ccl/vec3.hpp"

namespace ccl {

/// Exponent triple of a monomial x^i y^j z^k.
struct Monomial {
  int i, j, k;
};

/// Homogeneous polynomial of degree d in (x, y, z). Coefficients are stored in
/// graded-lex order: x^d, x^{d-1}y, x^{d-1}z, x^{d-2}y^2, ... , z^d.
template <Scalar T>
class HomPoly {
 public:
  HomPoly() : degree_(0), coeffs_(1, T(0)) {}
  explicit HomPoly(int degree) : degree_(degree), coeffs_(count(degree), T(0)) {}

  static std::size_t count(int d) { return static_cast<std::size_t>((d + 1) * (d + 2) / 2); }

  /// Position of x^i y^j z^(d-i-j).
  static std::size_t index(int d, int i, int j) {
    // Block for x^i starts after all blocks with larger x exponent.
    int before = 0;
    for (int a = d; a > i; --a) before += d - a + 1;
    return static_cast<std::size_t>(before + (d - i - j));
  }

  static Monomial monomial_at(int d, std::size_t pos) {
    std::size_t p = 0;
    for (int i = d; i >= 0; --i) {
      for (int j = d - i; j >= 0; --j) {
        if (p == pos) return {i, j, d - i - j};
        ++p;
      }
    }
    assert(false);
    return {0, 0, 0};
  }

  int degree() const { return degree_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<T>& coefficients() const { return coeffs_; }

  T& coeff(int i, int j, int k) {
    assert(i + j + k == degree_);
    (void)k;
    return coeffs_[index(degree_, i, j)];
  }
  const T& coeff(int i, int j, int k) const {
    assert(i + j + k == degree_);
    (void)k;
    return coeffs_[index(degree_, i, j)];
  }
  T& operator[](std::size_t pos) { return coeffs_[pos]; }
  const T& operator[](std::size_t pos) const { return coeffs_[pos]; }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const T& c) { return ccl::is_zero(c); });
  }

  T operator()(const Vec3<T>& p) const {
    // Power tables keep this exact for rationals and cheap for doubles.
    std::vector<T> px(degree_ + 1), py(degree_ + 1), pz(degree_ + 1);
    px[0] = py[0] = pz[0] = T(1);
    for (int e = 1; e <= degree_; ++e) {
      px[e] = px[e - 1] * p[0];
      py[e] = py[e - 1] * p[1];
      pz[e] = pz[e - 1] * p[2];
    }
    T acc(0);
    std::size_t pos = 0;
    for (int i = degree_; i >= 0; --i) {
      for (int j = degree_ - i; j >= 0; --j, ++pos) {
        if (ccl::is_zero(coeffs_[pos])) continue;
        acc += coeffs_[pos] * px[i] * py[j] * pz[degree_ - i - j];
      }
    }
    return acc;
  }

  HomPoly partial(int var) const {
    if (degree_ == 0) return HomPoly(0);
    HomPoly out(degree_ - 1);
    std::size_t pos = 0;
    for (int i = degree_; i >= 0; --i) {
      for (int j = degree_ - i; j >= 0; --j, ++pos) {
        int k = degree_ - i - j;
        int e = var == 0 ? i : (var == 1 ? j : k);
        if (e == 0 || ccl::is_zero(coeffs_[pos])) continue;
        int ni = i - (var == 0), nj = j - (var == 1), nk = k - (var == 2);
        out.coeff(ni, nj, nk) += T(e) * coeffs_[pos];
      }
    }
    return out;
  }

  Vec3<T> gradient(const Vec3<T>& p) const { return {partial(0)(p), partial(1)(p), partial(2)(p)}; }

  friend HomPoly operator+(const HomPoly& a, const HomPoly& b) {
    assert(a.degree_ == b.degree_);
    HomPoly out(a.degree_);
    for (std::size_t n = 0; n < a.size(); ++n) out.coeffs_[n] = a.coeffs_[n] + b.coeffs_[n];
    return out;
  }
  friend HomPoly operator-(const HomPoly& a, const HomPoly& b) {
    assert(a.degree_ == b.degree_);
    HomPoly out(a.degree_);
    for (std::size_t n = 0; n < a.size(); ++n) out.coeffs_[n] = a.coeffs_[n] - b.coeffs_[n];
    return out;
  }
  friend HomPoly operator*(const T& s, const HomPoly& a) {
    HomPoly out(a.degree_);
    for (std::size_t n = 0; n < a.size(); ++n) out.coeffs_[n] = s * a.coeffs_[n];
    return out;
  }
  friend HomPoly operator*(const HomPoly& a, const HomPoly& b) {
    HomPoly out(a.degree_ + b.degree_);
    for (std::size_t m = 0; m < a.size(); ++m) {
      if (ccl::is_zero(a.coeffs_[m])) continue;
      Monomial ma = monomial_at(a.degree_, m);
      for (std::size_t n = 0; n < b.size(); ++n) {
        if (ccl::is_zero(b.coeffs_[n])) continue;
        Monomial mb = monomial_at(b.degree_, n);
        out.coeff(ma.i + mb.i, ma.j + mb.j, ma.k + mb.k) += a.coeffs_[m] * b.coeffs_[n];
      }
    }
    return out;
  }
  friend bool operator==(const HomPoly& a, const HomPoly& b) {
    return a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
  }

  /// Linear form l x + m y + n z.
  static HomPoly linear(const Vec3<T>& l) {
    HomPoly out(1);
    out.coeff(1, 0, 0) = l[0];
    out.coeff(0, 1, 0) = l[1];
    out.coeff(0, 0, 1) = l[2];
    return out;
  }

  template <Scalar U>
  HomPoly<U> convert() const {
    HomPoly<U> out(degree_);
    for (std::size_t n = 0; n < size(); ++n) {
      if constexpr (std::same_as<T, U>) {
        out[n] = coeffs_[n];
      } else if constexpr (std::same_as<U, double>) {
        out[n] = to_double(coeffs_[n]);
      } else {
        out[n] = Rational(coeffs_[n]);
      }
    }
    return out;
  }

  /// Largest coefficient magnitude, as a double.
  double coefficient_scale() const {
    double s = 0.0;
    for (const T& c : coeffs_) s = std::max(s, std::fabs(to_double(c)));
    return s;
  }

 private:
  int degree_;
  std::vector<T> coeffs_;
};

/// Univariate polynomial with ascending coefficients.
template <Scalar T>
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<T> c) : c_(std::move(c)) { trim(); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<T>& coefficients() const { return c_; }
  const T& operator[](std::size_t n) const { return c_[n]; }
  const T& leading() const { return c_.back(); }

  T operator()(const T& t) const {
    T acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  UniPoly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<T> d(c_.size() - 1);
    for (std::size_t n = 1; n < c_.size(); ++n) d[n - 1] = T(static_cast<long>(n)) * c_[n];
    return UniPoly(std::move(d));
  }

  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> out(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t m = 0; m < a.c_.size(); ++m)
      for (std::size_t n = 0; n < b.c_.size(); ++n) out[m + n] += a.c_[m] * b.c_[n];
    return UniPoly(std::move(out));
  }
  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    std::vector<T> out(std::max(a.c_.size(), b.c_.size()), T(0));
    for (std::size_t n = 0; n < a.c_.size(); ++n) out[n] += a.c_[n];
    for (std::size_t n = 0; n < b.c_.size(); ++n) out[n] += b.c_[n];
    return UniPoly(std::move(out));
  }
  friend UniPoly operator-(const UniPoly& a) {
    std::vector<T> out(a.c_);
    for (auto& v : out) v = -v;
    return UniPoly(std::move(out));
  }
  friend UniPoly operator*(const T& s, const UniPoly& a) {
    std::vector<T> out(a.c_);
    for (auto& v : out) v = s * v;
    return UniPoly(std::move(out));
  }

  /// Polynomial long division; exact for rationals.
  static void divmod(const UniPoly& num, const UniPoly& den, UniPoly& quot, UniPoly& rem) {
    assert(!den.is_zero());
    std::vector<T> r(num.c_);
    int dn = den.degree();
    if (num.degree() < dn) {
      quot = {};
      rem = num;
      return;
    }
    std::vector<T> q(num.c_.size() - den.c_.size() + 1, T(0));
    for (int n = num.degree(); n >= dn; --n) {
      T f = r[n] / den.c_.back();
      q[n - dn] = f;
      for (int m = 0; m <= dn; ++m) r[n - dn + m] -= f * den.c_[m];
      r[n] = T(0);
    }
    r.resize(dn > 0 ? dn : 0);
    quot = UniPoly(std::move(q));
    rem = UniPoly(std::move(r));
  }

  UniPoly monic() const {
    if (is_zero()) return *this;
    T lead = c_.back();
    std::vector<T> out(c_);
    for (auto& v : out) v = v / lead;
    return UniPoly(std::move(out));
  }

 private:
  void trim() {
    while (!c_.empty() && ccl::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<T> c_;
};

/// Monic gcd over the rationals.
inline UniPoly<Rational> gcd(UniPoly<Rational> a, UniPoly<Rational> b) {
  while (!b.is_zero()) {
    UniPoly<Rational> q, r;
    UniPoly<Rational>::divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Yun square-free decomposition: p = c * prod_i f_i^i. Entry i-1 holds f_i.
inline std::vector<UniPoly<Rational>> square_free_decomposition(const UniPoly<Rational>& p) {
  std::vector<UniPoly<Rational>> out;
  if (p.degree() <= 0) return out;
  UniPoly<Rational> dp = p.derivative();
  UniPoly<Rational> a = gcd(p, dp);
  UniPoly<Rational> b, c, d, rem;
  UniPoly<Rational>::divmod(p, a, b, rem);
  UniPoly<Rational>::divmod(dp, a, c, rem);
  d = c + (-b.derivative());
  while (b.degree() > 0) {
    UniPoly<Rational> f = gcd(b, d);
    out.push_back(f);
    UniPoly<Rational> nb, nc;
    UniPoly<Rational>::divmod(b, f, nb, rem);
    UniPoly<Rational>::divmod(d, f, nc, rem);
    b = nb;
    d = nc + (-b.derivative());
  }
  return out;
}

/// Sturm sequence of a square-free polynomial.
inline std::vector<UniPoly<Rational>> sturm_sequence(const UniPoly<Rational>& p) {
  std::vector<UniPoly<Rational>> seq{p, p.derivative()};
  while (!seq.back().is_zero() && seq.back().degree() > 0) {
    UniPoly<Rational> q, r;
    UniPoly<Rational>::divmod(seq[seq.size() - 2], seq.back(), q, r);
    if (r.is_zero()) break;
    seq.push_back(-r);
  }
  return seq;
}

inline int sign_variations(const std::vector<UniPoly<Rational>>& seq, const Rational& t) {
  int changes = 0, last = 0;
  for (const auto& s : seq) {
    int v = sgn(s(t));
    if (v == 0) continue;
    if (last != 0 && v != last) ++changes;
    last = v;
  }
  return changes;
}

/// Cauchy bound on |roots|.
inline Rational root_bound(const UniPoly<Rational>& p) {
  Rational m(0);
  for (int n = 0; n < p.degree(); ++n) m = std::max<Rational>(m, abs(Rational(p[n] / p.leading())));
  return Rational(m + 1);
}

/// One real root: approximate value, isolating interval, multiplicity.
struct RealRoot {
  double value = 0.0;
  Rational lo, hi;
  int multiplicity = 1;
  bool exact = false;               // value is exactly lo == hi
  bool multiplicity_certain = true;  // false for float clustering heuristics
};

/// All real roots of a rational polynomial, isolated exactly via Sturm
/// sequences and refined by bisection to `width`.
inline std::vector<RealRoot> real_roots(const UniPoly<Rational>& p, double width = 1e-14) {
  std::vector<RealRoot> roots;
  if (p.degree() <= 0) return roots;
  auto factors = square_free_decomposition(p);
  for (std::size_t mult = 1; mult <= factors.size(); ++mult) {
    const UniPoly<Rational>& f = factors[mult - 1];
    if (f.degree() <= 0) continue;
    if (f.degree() == 1) {
      Rational r = -f[0] / f[1];
      roots.push_back({r.get_d(), r, r, static_cast<int>(mult), true, true});
      continue;
    }
    auto seq = sturm_sequence(f);
    Rational bound = root_bound(f);
    struct Interval {
      Rational lo, hi;
      int vlo, vhi;
    };
    std::vector<Interval> work{{-bound, bound, sign_variations(seq, -bound), sign_variations(seq, bound)}};
    while (!work.empty()) {
      Interval iv = work.back();
      work.pop_back();
      int n = iv.vlo - iv.vhi;
      if (n == 0) continue;
      if (n == 1) {
        Rational lo = iv.lo, hi = iv.hi;
        bool exact = false;
        if (sgn(f(lo)) == 0) {
          hi = lo;
          exact = true;
        } else if (sgn(f(hi)) == 0) {
          lo = hi;
          exact = true;
        }
        int slo = sgn(f(lo));
        Rational w(width);
        while (!exact && Rational(hi - lo) > w * (1 + std::max<Rational>(abs(lo), abs(hi)))) {
          Rational mid = (lo + hi) / 2;
          int sm = sgn(f(mid));
          if (sm == 0) {
            lo = hi = mid;
            exact = true;
          } else if (sm == slo) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        Rational mid = (lo + hi) / 2;
        roots.push_back({mid.get_d(), lo, hi, static_cast<int>(mult), exact, true});
        continue;
      }
      Rational mid = (iv.lo + iv.hi) / 2;
      if (sgn(f(mid)) == 0) {
        // Shift the split point off the root; a square-free f has finitely many.
        mid = (iv.lo + 2 * iv.hi) / 3;
      }
      int vm = sign_variations(seq, mid);
      work.push_back({iv.lo, mid, iv.vlo, vm});
      work.push_back({mid, iv.hi, vm, iv.vhi});
    }
  }
  std::sort(roots.begin(), roots.end(), [](const RealRoot& a, const RealRoot& b) { return a.value < b.value; });
  return roots;
}

/// Real roots of a float polynomial by bracketed bisection on monotone pieces.
/// Critical points where |p| is within tolerance of zero are reported as
/// multiple roots with multiplicity_certain = false.
inline std::vector<RealRoot> real_roots(const UniPoly<double>& p, const Tolerance& tol = {}) {
  std::vector<RealRoot> roots;
  int deg = p.degree();
  if (deg <= 0) return roots;
  double lead = p.leading();
  if (deg == 1) {
    double r = -p[0] / lead;
    roots.push_back({r, Rational(r), Rational(r), 1, false, true});
    return roots;
  }
  double bound = 0.0;
  for (int n = 0; n < deg; ++n) bound = std::max(bound, std::fabs(p[n] / lead));
  bound += 1.0;
  auto crit_roots = real_roots(p.derivative(), tol);
  std::vector<double> knots{-bound};
  for (const auto& c : crit_roots)
    if (c.value > -bound && c.value < bound) knots.push_back(c.value);
  knots.push_back(bound);
  std::sort(knots.begin(), knots.end());

  auto scale_at = [&](double t) {
    double s = 0.0, tp = 1.0;
    for (int n = 0; n <= deg; ++n) {
      s += std::fabs(p[n]) * tp;
      tp *= std::fabs(t);
    }
    return s;
  };
  // Multiple roots sit at critical points.
  std::vector<double> multiple;
  for (const auto& c : crit_roots) {
    double v = p(c.value);
    if (std::fabs(v) <= tol.eps * scale_at(c.value)) {
      roots.push_back({c.value, Rational(c.value), Rational(c.value), c.multiplicity + 1, false, false});
      multiple.push_back(c.value);
    }
  }
  auto near_multiple = [&](double t) {
    for (double m : multiple)
      if (std::fabs(t - m) <= std::cbrt(tol.eps) * (1.0 + std::fabs(m))) return true;
    return false;
  };
  for (std::size_t n = 0; n + 1 < knots.size(); ++n) {
    double lo = knots[n], hi = knots[n + 1];
    double flo = p(lo), fhi = p(hi);
    if (flo == 0.0 || fhi == 0.0 || (flo > 0) == (fhi > 0)) {
      if (flo == 0.0 && !near_multiple(lo)) roots.push_back({lo, Rational(lo), Rational(lo), 1, false, true});
      continue;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + std::fabs(lo)); ++it) {
      double mid = 0.5 * (lo + hi);
      double fm = p(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm > 0) == (flo > 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    double r = 0.5 * (lo + hi);
    if (!near_multiple(r)) roots.push_back({r, Rational(r), Rational(r), 1, false, true});
  }
  if (p(bound) == 0.0 && !near_multiple(bound)) roots.push_back({bound, Rational(bound), Rational(bound), 1, false, true});
  std::sort(roots.begin(), roots.end(), [](const RealRoot& a, const RealRoot& b) { return a.value < b.value; });
  return roots;
}

/// Binary form f(s*P + t*Q) as ascending coefficients in t (coefficient of
/// s^(d-j) t^j at index j). Computed by expanding each coordinate as a linear
/// polynomial in t with s = 1.
template <Scalar T>
std::vector<T> restrict_to_line(const HomPoly<T>& f, const Vec3<T>& p, const Vec3<T>& q) {
  int d = f.degree();
  std::vector<T> out(d + 1, T(0));
  // Expand with explicit coefficient vectors so leading zeros are kept.
  auto mul = [](const std::vector<T>& a, const std::vector<T>& b) {
    std::vector<T> r(a.size() + b.size() - 1, T(0));
    for (std::size_t m = 0; m < a.size(); ++m)
      for (std::size_t n = 0; n < b.size(); ++n) r[m + n] += a[m] * b[n];
    return r;
  };
  std::array<std::vector<T>, 3> base{std::vector<T>{p[0], q[0]}, std::vector<T>{p[1], q[1]},
                                     std::vector<T>{p[2], q[2]}};
  for (std::size_t pos = 0; pos < f.size(); ++pos) {
    if (is_zero(f[pos])) continue;
    Monomial m = HomPoly<T>::monomial_at(d, pos);
    std::vector<T> term{f[pos]};
    for (int e = 0; e < m.i; ++e) term = mul(term, base[0]);
    for (int e = 0; e < m.j; ++e) term = mul(term, base[1]);
    for (int e = 0; e < m.k; ++e) term = mul(term, base[2]);
    for (std::size_t n = 0; n < term.size(); ++n) out[n] += term[n];
  }
  return out;
}

}  // namespace ccl
