#pragma once

// Wall invariants (mu, p1, b3) of a smooth 6-manifold: congruence checks,
// the small-cube search, and the obstruction pipeline for Calabi-Yau
// structures on cubic forms of the family m F_k.

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccl/cones.hpp"
#include "ccl/curve.hpp"
#include "ccl/forms.hpp"
#include "ccl/sphere.hpp"

namespace ccl {

using IVec3 = std::array<long long, 3>;

inline std::string to_string(const IVec3& v) {
  return "(" + std::to_string(v[0]) + "," + std::to_string(v[1]) + "," + std::to_string(v[2]) + ")";
}

namespace detail {

/// Integer table mu_ijk of an integral form.
struct IntForm {
  std::array<long long, 27> c{};

  explicit IntForm(const TrilinearForm& mu) {
    if (!mu.integral()) throw IntegralityError("trilinear form is not integral");
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) c[i * 9 + j * 3 + k] = mu.mu(i, j, k).get_num().get_si();
  }
  long long operator()(const IVec3& a, const IVec3& b, const IVec3& d) const {
    long long acc = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) acc += c[i * 9 + j * 3 + k] * a[i] * b[j] * d[k];
    return acc;
  }
};

inline long long mod(long long a, long long m) { return ((a % m) + m) % m; }

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace detail

/// Family tag: mu = m F_k.
struct FamilyTag {
  long long m = 1;
  Rational k;
};

/// Wall data on H^2 = Z^3: cubic form mu, first Pontryagin class p1 as a
/// linear form, and the even third Betti number.
struct WallData {
  TrilinearForm mu;
  IVec3 p1{0, 0, 0};
  long long b3 = 0;
  std::optional<FamilyTag> family;

  WallData() = default;
  WallData(TrilinearForm m, IVec3 p, long long b, std::optional<FamilyTag> fam = std::nullopt)
      : mu(std::move(m)), p1(p), b3(b), family(std::move(fam)) {
    if (b3 < 0 || b3 % 2 != 0) throw PreconditionError("b3 must be even and nonnegative, got " + std::to_string(b3));
  }

  /// mu = m F_k. The form is not required to be integral here; the
  /// congruence check reports it.
  static WallData from_family(long long m, const Rational& k, IVec3 p1, long long b3) {
    return WallData(ParamCubic(k).form().scaled(Rational(long(m))), p1, b3, FamilyTag{m, k});
  }

  /// p1 = -2 t c2 for the least t >= 1 meeting the mod 24 condition on the
  /// basis, so that c2 keeps its sign pattern.
  static WallData from_c2_direction(long long m, const Rational& k, IVec3 c2, long long b3) {
    WallData w = from_family(m, k, {0, 0, 0}, b3);
    detail::IntForm f(w.mu);
    for (long long t = 1; t <= 24; ++t) {
      IVec3 p{-2 * t * c2[0], -2 * t * c2[1], -2 * t * c2[2]};
      bool ok = true;
      for (int i = 0; i < 3; ++i) {
        IVec3 e{0, 0, 0};
        e[i] = 1;
        if (detail::mod(p[i] - 4 * f(e, e, e), 24) != 0) ok = false;
      }
      if (ok) {
        w.p1 = p;
        return w;
      }
    }
    throw Error("no multiple of c2 meets the mod 24 condition");
  }

  nlohmann::json to_json() const {
    nlohmann::json mu_json = nlohmann::json::array();
    for (const Rational& v : mu.values()) mu_json.push_back(to_string(v));
    nlohmann::json j = {{"mu", mu_json}, {"p1", p1}, {"b3", b3}};
    if (family) j["family"] = {{"m", family->m}, {"k", to_string(family->k)}};
    return j;
  }

  static WallData from_json(const nlohmann::json& j) {
    try {
      const auto& arr = j.at("mu");
      if (!arr.is_array() || arr.size() != 10) throw ParseError("wall data: mu needs ten entries");
      std::array<Rational, 10> vals;
      for (std::size_t n = 0; n < 10; ++n) vals[n] = parse_rational(arr[n].get<std::string>());
      std::optional<FamilyTag> fam;
      if (j.contains("family"))
        fam = FamilyTag{j["family"].at("m").get<long long>(), parse_rational(j["family"].at("k").get<std::string>())};
      return WallData(TrilinearForm(vals), j.at("p1").get<IVec3>(), j.at("b3").get<long long>(), fam);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("wall data: ") + e.what());
    }
  }

  friend bool operator==(const WallData& a, const WallData& b) {
    bool fam = a.family.has_value() == b.family.has_value() &&
               (!a.family || (a.family->m == b.family->m && a.family->k == b.family->k));
    return a.mu == b.mu && a.p1 == b.p1 && a.b3 == b.b3 && fam;
  }

  std::string canonical() const {
    std::ostringstream os;
    os << "mu=";
    for (const Rational& v : mu.values()) os << to_string(v) << ";";
    os << "p1=" << p1[0] << "," << p1[1] << "," << p1[2] << ";b3=" << b3;
    if (family) os << ";family=" << family->m << "," << to_string(family->k);
    return os.str();
  }
};

struct CongruenceResult {
  bool ok = true;
  std::string condition;  // "mod2" or "mod24" on failure
  IVec3 x{0, 0, 0}, y{0, 0, 0};
  std::string message;
};

/// mu(x,x,y) = mu(x,y,y) mod 2 over the box |.|_inf <= 3 (which covers every
/// residue class), and p1(x) = 4 mu(x,x,x) mod 24 on the basis. The basis
/// suffices because f = p1 - 4 mu(x,x,x) satisfies
/// f(x+y) - f(x) - f(y) = -12 (mu(x,x,y) + mu(x,y,y)) and n^3 = n mod 6; the
/// reduction is re-checked over the box.
inline CongruenceResult check_wall_congruences(const TrilinearForm& mu, const IVec3& p1) {
  detail::IntForm f(mu);
  CongruenceResult out;
  std::vector<IVec3> box;
  for (long long a = -3; a <= 3; ++a)
    for (long long b = -3; b <= 3; ++b)
      for (long long c = -3; c <= 3; ++c) box.push_back({a, b, c});
  for (const IVec3& x : box)
    for (const IVec3& y : box)
      if (detail::mod(f(x, x, y) - f(x, y, y), 2) != 0) {
        out.ok = false;
        out.condition = "mod2";
        out.x = x;
        out.y = y;
        out.message = "mu(x,x,y) - mu(x,y,y) is odd at x=" + to_string(x) + ", y=" + to_string(y);
        return out;
      }
  auto fval = [&](const IVec3& x) { return p1[0] * x[0] + p1[1] * x[1] + p1[2] * x[2] - 4 * f(x, x, x); };
  for (int i = 0; i < 3; ++i) {
    IVec3 e{0, 0, 0};
    e[i] = 1;
    if (detail::mod(fval(e), 24) != 0) {
      out.ok = false;
      out.condition = "mod24";
      out.x = e;
      out.message = "p1(e" + std::to_string(i + 1) + ") - 4 mu(e" + std::to_string(i + 1) + "^3) = " +
                    std::to_string(fval(e)) + " is not divisible by 24";
      return out;
    }
  }
  for (const IVec3& x : box)
    if (detail::mod(fval(x), 24) != 0) throw Error("mod 24 reduction failed at x=" + to_string(x));
  return out;
}

struct SmallCubeResult {
  std::vector<IVec3> found;
  bool certified_empty = false;  // every cube value is a multiple of `modulus` >= 10
  long long modulus = 0;
  long long bound = 0;
  bool searched = false;
};

/// Integer E with |E|_inf <= bound and 1 <= mu(E,E,E) <= 9. When all cube
/// values are multiples of some g >= 10 the answer is empty on all of Z^3 and
/// no search is made. g is m for a family tag m F_k with 3k integral, or in
/// general the gcd of the cube values on {0..3}^3, which determine the
/// integer-valued cubic.
inline SmallCubeResult small_cube_search(const TrilinearForm& mu, long long bound = 50,
                                         const std::optional<FamilyTag>& family = std::nullopt) {
  detail::IntForm f(mu);
  SmallCubeResult out;
  out.bound = bound;
  if (family && family->m >= 10) {
    Rational t = 3 * family->k;
    t.canonicalize();
    if (t.get_den() == 1) {
      out.certified_empty = true;
      out.modulus = family->m;
      return out;
    }
  }
  long long g = 0;
  for (long long a = 0; a <= 3; ++a)
    for (long long b = 0; b <= 3; ++b)
      for (long long c = 0; c <= 3; ++c) {
        IVec3 e{a, b, c};
        g = std::gcd(g, std::llabs(f(e, e, e)));
      }
  if (g >= 10 || (g == 0 && mu.is_zero())) {
    out.certified_empty = true;
    out.modulus = g;
    return out;
  }
  out.searched = true;
  for (long long a = -bound; a <= bound; ++a)
    for (long long b = -bound; b <= bound; ++b)
      for (long long c = -bound; c <= bound; ++c) {
        IVec3 e{a, b, c};
        long long v = f(e, e, e);
        if (v >= 1 && v <= 9) out.found.push_back(e);
      }
  return out;
}

struct C2Min {
  double min = 0.0;
  Vec3d argmin;
};

/// Minimum of c2 . (x, y, 1) over the closed bounded oval region of F_k. The
/// objective is linear, so the minimum sits on the oval: coarse scan of the
/// traced oval, then golden-section search along the curve.
inline C2Min minimize_c2_on_bounded(const Rational& k, const Vec3d& c2, int resolution = 2048) {
  if (!(k > 1)) throw PreconditionError("minimize_c2_on_bounded: the cubic has a bounded oval only for k > 1");
  Polyline pl = trace_branch(k, {CurveKind::Cubic, "boundedOval"}, resolution);
  auto pts = pl.points();
  if (c2[0] == 0.0 && c2[1] == 0.0) return {c2[2], pts.front()};
  PlaneCurve curve = cubic_curve(k);
  auto obj = [&](const Vec3d& p) { return c2[0] * p[0] + c2[1] * p[1] + c2[2]; };
  std::size_t n = pts.size(), best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (obj(pts[i]) < obj(pts[best])) best = i;
  auto at = [&](double t) {
    double ft = std::floor(t);
    std::size_t i = std::size_t((long long)ft % (long long)n + (long long)n) % n;
    double s = t - ft;
    Vec3d r = normalized((1 - s) * pl.rays[i] + s * pl.rays[(i + 1) % n]);
    auto q = curve.project(r);
    Vec3d p = q ? *q : r;
    return Vec3d{p[0] / p[2], p[1] / p[2], 1.0};
  };
  double lo = double(best) - 1.0 + double(n), hi = double(best) + 1.0 + double(n);
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = obj(at(x1)), f2 = obj(at(x2));
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = obj(at(x1));
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = obj(at(x2));
    }
  }
  Vec3d arg = at((lo + hi) / 2);
  return {obj(arg), arg};
}

enum class VerdictKind {
  InvalidWallData,
  NoCY_OneRealComponent,
  NoCY_C2NotPositive,
  NecessaryConditionsPass,
  UnknownOutsideScope
};

inline const char* to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::InvalidWallData: return "InvalidWallData";
    case VerdictKind::NoCY_OneRealComponent: return "NoCY_OneRealComponent";
    case VerdictKind::NoCY_C2NotPositive: return "NoCY_C2NotPositive";
    case VerdictKind::NecessaryConditionsPass: return "NecessaryConditionsPass";
    case VerdictKind::UnknownOutsideScope: return "UnknownOutsideScope";
  }
  return "?";
}

struct Verdict {
  VerdictKind kind = VerdictKind::UnknownOutsideScope;
  std::string reason;
  nlohmann::json assumptions = nlohmann::json::object();
  nlohmann::json witnesses = nlohmann::json::object();
  std::string inputs_hash;

  nlohmann::json to_json() const {
    return {{"verdict", to_string(kind)},
            {"reason", reason},
            {"assumptions", assumptions},
            {"witnesses", witnesses},
            {"inputs_hash", inputs_hash}};
  }

  static Verdict from_json(const nlohmann::json& j) {
    static const VerdictKind kinds[] = {VerdictKind::InvalidWallData, VerdictKind::NoCY_OneRealComponent,
                                        VerdictKind::NoCY_C2NotPositive, VerdictKind::NecessaryConditionsPass,
                                        VerdictKind::UnknownOutsideScope};
    try {
      Verdict v;
      std::string name = j.at("verdict").get<std::string>();
      bool found = false;
      for (VerdictKind k : kinds)
        if (name == to_string(k)) {
          v.kind = k;
          found = true;
        }
      if (!found) throw ParseError("unknown verdict '" + name + "'");
      v.reason = j.at("reason").get<std::string>();
      v.assumptions = j.at("assumptions");
      v.witnesses = j.at("witnesses");
      v.inputs_hash = j.at("inputs_hash").get<std::string>();
      return v;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("verdict: ") + e.what());
    }
  }

  friend bool operator==(const Verdict& a, const Verdict& b) { return a.to_json() == b.to_json(); }
};

namespace detail {

/// FNV-1a of the +/-/0 signs of a form at the icosphere vertices.
inline std::string sign_pattern_hash(const HomPoly<Rational>& poly, int depth) {
  HomPoly<double> p = poly.convert<double>();
  Icosphere ico(depth);
  std::string bits;
  for (const Vec3d& v : ico.vertices()) {
    double x = p(v);
    bits += x > 0 ? '+' : (x < 0 ? '-' : '0');
  }
  return hex64(fnv1a(bits));
}

/// Real zeros found on crossing edges of an icosphere all have gradient
/// norm above eps; also returns a hash of the sign pattern.
inline bool smooth_spot_check(const HomPoly<Rational>& poly, int depth, std::string* sign_hash = nullptr,
                              double eps = 1e-6) {
  HomPoly<double> p = poly.convert<double>();
  double scale = p.coefficient_scale();
  Icosphere ico(depth);
  const auto& v = ico.vertices();
  std::string bits(v.size(), '0');
  std::vector<double> val(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    val[i] = p(v[i]);
    bits[i] = val[i] > 0 ? '+' : (val[i] < 0 ? '-' : '0');
  }
  if (sign_hash) *sign_hash = hex64(fnv1a(bits));
  bool ok = true;
  for (const auto& e : ico.edges()) {
    if ((val[e[0]] > 0) == (val[e[1]] > 0)) continue;
    Vec3d a = v[e[0]], b = v[e[1]];
    double fa = val[e[0]];
    for (int it = 0; it < 60; ++it) {
      Vec3d m = normalized(a + b);
      double fm = p(m);
      if ((fm > 0) == (fa > 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    Vec3d z = normalized(a + b);
    if (norm(p.gradient(z)) < eps * scale) ok = false;
  }
  return ok;
}

}  // namespace detail

/// Obstruction pipeline: congruences, regime and smoothness, the small-cube
/// hypothesis, number of real components, then positivity of c2 = -p1/2 on
/// the cone over the bounded oval.
inline Verdict decide_obstruction(const WallData& data) {
  Verdict v;
  v.inputs_hash = detail::hex64(detail::fnv1a(data.canonical()));
  auto finish = [&](VerdictKind k, std::string reason) {
    v.kind = k;
    v.reason = std::move(reason);
    return v;
  };
  // (1) Wall congruences.
  if (!data.mu.integral()) {
    std::string bad;
    for (std::size_t n = 0; n < 10; ++n)
      if (!is_integer(data.mu.values()[n])) {
        auto [i, j, k] = TrilinearForm::kIndex[n];
        bad += (bad.empty() ? "" : " ") + std::string("mu") + std::to_string(i + 1) + std::to_string(j + 1) +
               std::to_string(k + 1) + "=" + to_string(data.mu.values()[n]);
      }
    v.witnesses["non_integral"] = bad;
    return finish(VerdictKind::InvalidWallData, "non-integral trilinear form: " + bad);
  }
  CongruenceResult cr = check_wall_congruences(data.mu, data.p1);
  v.assumptions["congruences"] = cr.ok;
  if (!cr.ok) {
    v.witnesses["congruence"] = {{"condition", cr.condition}, {"x", cr.x}, {"y", cr.y}};
    return finish(VerdictKind::InvalidWallData, cr.message);
  }
  for (long long c : data.p1)
    if (c % 2 != 0) return finish(VerdictKind::InvalidWallData, "p1 is odd, so c2 = -p1/2 is not integral");
  IVec3 c2{-data.p1[0] / 2, -data.p1[1] / 2, -data.p1[2] / 2};
  v.assumptions["c2"] = c2;
  // (2) Regime and smoothness.
  int components = 0;
  if (data.family) {
    const FamilyTag& fam = *data.family;
    if (!(ParamCubic(fam.k).form().scaled(Rational(long(fam.m))) == data.mu))
      return finish(VerdictKind::InvalidWallData, "family tag does not match the trilinear form");
    Regime r = regime_of(fam.k);
    v.assumptions["regime"] = to_string(r);
    v.assumptions["smooth_cubic"] = r != Regime::DegenerateCubic;
    v.assumptions["smooth_hessian"] = !is_degenerate(r);
    if (is_degenerate(r)) return finish(VerdictKind::UnknownOutsideScope, "cubic or Hessian is singular at k = " + to_string(fam.k));
    components = r == Regime::TwoComponents ? 2 : 1;
    v.witnesses["sign_pattern_hash"] = detail::sign_pattern_hash(data.mu.cubic(), 7);
  } else {
    HomPoly<Rational> cubic = data.mu.cubic();
    HomPoly<Rational> hess = hessian_polynomial(cubic);
    std::string hash;
    bool smooth_f = detail::smooth_spot_check(cubic, 7, &hash);
    bool smooth_h = hess.is_zero() ? false : detail::smooth_spot_check(hess, 7);
    v.assumptions["smooth_cubic"] = smooth_f;
    v.assumptions["smooth_hessian"] = smooth_h;
    v.witnesses["sign_pattern_hash"] = hash;
    if (!smooth_f || !smooth_h) return finish(VerdictKind::UnknownOutsideScope, "smoothness spot-check failed");
    components = count_real_components(cubic);
  }
  v.witnesses["real_components"] = components;
  // (3) No rigid surfaces with small positive cube.
  SmallCubeResult sc = small_cube_search(data.mu, 50, data.family);
  v.assumptions["small_cube"] = {{"certified_empty", sc.certified_empty},
                                 {"modulus", sc.modulus},
                                 {"bound", sc.bound},
                                 {"searched", sc.searched},
                                 {"found", sc.found.size()}};
  if (!sc.found.empty()) {
    nlohmann::json list = nlohmann::json::array();
    for (std::size_t i = 0; i < std::min<std::size_t>(sc.found.size(), 20); ++i) list.push_back(sc.found[i]);
    v.witnesses["small_cube_classes"] = list;
    return finish(VerdictKind::UnknownOutsideScope, "classes with cube in [1, 9] exist");
  }
  if (!sc.certified_empty)
    return finish(VerdictKind::UnknownOutsideScope, "small-cube search is empty only inside the box |E| <= 50");
  // (4) One real component.
  if (components == 1) return finish(VerdictKind::NoCY_OneRealComponent, "the real cubic curve has one component");
  if (!data.family) return finish(VerdictKind::UnknownOutsideScope, "bounded-oval minimisation needs the family form");
  // (5) c2 on the cone over the bounded oval.
  C2Min mn = minimize_c2_on_bounded(data.family->k, Vec3d{double(c2[0]), double(c2[1]), double(c2[2])});
  v.witnesses["c2_min"] = mn.min;
  v.witnesses["argmin"] = {mn.argmin[0], mn.argmin[1], mn.argmin[2]};
  if (mn.min <= 0) return finish(VerdictKind::NoCY_C2NotPositive, "c2 is not positive on the cone over the bounded oval");
  return finish(VerdictKind::NecessaryConditionsPass, "all necessary conditions hold");
}

/// A family member with no Calabi-Yau structure. k < 1 integral with
/// k not in {0, -2} gives one real component; k > 1 integral uses the c2
/// direction (default x + y - 2z, negative on the oval).
inline WallData generate_no_cy_example(const Rational& k, long long m, long long b3, IVec3 p1_seed = {0, 0, 0},
                                       IVec3 c2_direction = {1, 1, -2}) {
  if (m < 10 || m % 2 != 0) throw PreconditionError("m must be even and at least 10");
  if (b3 < 0 || b3 % 2 != 0) throw PreconditionError("b3 must be even and nonnegative");
  if (k.get_den() != 1) throw PreconditionError("k must be an integer");
  Regime r = regime_of(k);
  if (is_degenerate(r)) throw PreconditionError("k must avoid 1, 0 and -2");
  WallData w;
  if (r == Regime::TwoComponents) {
    w = WallData::from_c2_direction(m, k, c2_direction, b3);
  } else {
    w = WallData::from_family(m, k, p1_seed, b3);
    detail::IntForm f(w.mu);
    for (int i = 0; i < 3; ++i) {
      IVec3 e{0, 0, 0};
      e[i] = 1;
      w.p1[i] -= detail::mod(w.p1[i] - 4 * f(e, e, e), 24);
    }
  }
  Verdict v = decide_obstruction(w);
  if (v.kind != VerdictKind::NoCY_OneRealComponent && v.kind != VerdictKind::NoCY_C2NotPositive)
    throw Error(std::string("generated example did not yield an obstruction: ") + to_string(v.kind));
  return w;
}

}  // namespace ccl
