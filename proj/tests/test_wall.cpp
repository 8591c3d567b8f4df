#include <gtest/gtest.h>

#include <random>

#include "ccl/wall.hpp"
#include "support/oracles.hpp"

using namespace ccl;

namespace {

/// Integer trilinear form from ten mu values in the order 111 ... 333.
TrilinearForm int_form(const std::array<long long, 10>& v) {
  std::array<Rational, 10> q;
  for (std::size_t n = 0; n < 10; ++n) q[n] = Rational(long(v[n]));
  return TrilinearForm(q);
}

/// mu(a, b, c) from a hand-built 27-entry table.
struct Table {
  long long t[3][3][3];
  explicit Table(const std::array<long long, 10>& v) {
    const int idx[10][3] = {{0, 0, 0}, {0, 0, 1}, {0, 0, 2}, {0, 1, 1}, {0, 1, 2},
                            {0, 2, 2}, {1, 1, 1}, {1, 1, 2}, {1, 2, 2}, {2, 2, 2}};
    for (int n = 0; n < 10; ++n) {
      int p[3] = {idx[n][0], idx[n][1], idx[n][2]};
      std::sort(p, p + 3);
      do t[p[0]][p[1]][p[2]] = v[n];
      while (std::next_permutation(p, p + 3));
    }
  }
  long long operator()(const IVec3& a, const IVec3& b, const IVec3& c) const {
    long long s = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) s += t[i][j][k] * a[i] * b[j] * c[k];
    return s;
  }
};

long long md(long long a, long long m) { return ((a % m) + m) % m; }

/// Both congruences checked directly on a box.
bool congruences_by_brute_force(const Table& f, const IVec3& p1) {
  std::vector<IVec3> box;
  for (long long a = -2; a <= 2; ++a)
    for (long long b = -2; b <= 2; ++b)
      for (long long c = -2; c <= 2; ++c) box.push_back({a, b, c});
  for (const IVec3& x : box) {
    if (md(p1[0] * x[0] + p1[1] * x[1] + p1[2] * x[2] - 4 * f(x, x, x), 24) != 0) return false;
    for (const IVec3& y : box)
      if (md(f(x, x, y) - f(x, y, y), 2) != 0) return false;
  }
  return true;
}

/// Minimum of c2 . (x, y, 1) over the oval by a dense radial scan from the
/// interior point (1/3, 1/3), with the boundary found by bisection on F.
double dense_min(double k, const Vec3d& c2, int n = 100000) {
  const double cx = 1.0 / 3, cy = 1.0 / 3;
  auto f = [&](double th, double r) { return test::family_display(k, Vec3d{cx + r * std::cos(th), cy + r * std::sin(th), 1}); };
  auto root = [&](double th, double lo, double hi) {
    for (int it = 0; it < 60; ++it) {
      double mid = (lo + hi) / 2;
      (f(th, mid) > 0 ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
  };
  double best = 1e300, r_prev = -1;
  for (int i = 0; i < n; ++i) {
    double th = 2 * M_PI * i / n, r;
    if (r_prev > 0 && f(th, r_prev * 0.98) > 0 && f(th, r_prev * 1.02) <= 0) {
      r = root(th, r_prev * 0.98, r_prev * 1.02);
    } else {
      double lo = 0, hi = 1e-3;
      while (f(th, hi) > 0) lo = hi, hi *= 1.5;
      r = root(th, lo, hi);
    }
    r_prev = r;
    best = std::min(best, c2[0] * (cx + r * std::cos(th)) + c2[1] * (cy + r * std::sin(th)) + c2[2]);
  }
  return best;
}

}  // namespace

TEST(Congruences, Examples) {
  TrilinearForm zero = int_form({});
  EXPECT_TRUE(check_wall_congruences(zero, {24, 0, 0}).ok);
  EXPECT_TRUE(check_wall_congruences(zero, {0, 0, 0}).ok);
  CongruenceResult bad = check_wall_congruences(zero, {2, 0, 0});
  EXPECT_FALSE(bad.ok);
  EXPECT_EQ(bad.condition, "mod24");
  EXPECT_EQ(bad.x, (IVec3{1, 0, 0}));
  CongruenceResult odd = check_wall_congruences(int_form({0, 1, 0, 0, 0, 0, 0, 0, 0, 0}), {0, 0, 0});
  EXPECT_FALSE(odd.ok);
  EXPECT_EQ(odd.condition, "mod2");
  Table t({0, 1, 0, 0, 0, 0, 0, 0, 0, 0});
  EXPECT_NE(md(t(odd.x, odd.x, odd.y) - t(odd.x, odd.y, odd.y), 2), 0);
}

TEST(Congruences, FamilyForms) {
  WallData w = WallData::from_family(12, Rational(5), {0, 0, 0}, 6);
  EXPECT_TRUE(check_wall_congruences(w.mu, w.p1).ok);
  WallData c = WallData::from_c2_direction(12, Rational(5), {1, 1, -2}, 6);
  EXPECT_EQ(c.p1, (IVec3{-24, -24, 48}));
  EXPECT_TRUE(check_wall_congruences(c.mu, c.p1).ok);
}

TEST(Congruences, AgreeWithBruteForce) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long long> small(-4, 4), coin(0, 1), shift(-2, 2);
  int passing = 0;
  for (int n = 0; n < 500; ++n) {
    std::array<long long, 10> v;
    bool even = coin(rng);
    for (auto& x : v) x = even ? 2 * small(rng) : small(rng);
    Table t(v);
    IVec3 p1;
    bool aligned = coin(rng);
    for (int i = 0; i < 3; ++i) {
      IVec3 e{0, 0, 0};
      e[i] = 1;
      p1[i] = aligned ? 4 * t(e, e, e) + 24 * shift(rng) : 2 * small(rng);
    }
    bool expect = congruences_by_brute_force(t, p1);
    EXPECT_EQ(check_wall_congruences(int_form(v), p1).ok, expect) << n;
    passing += expect;
  }
  EXPECT_GT(passing, 20);
}

TEST(Congruences, NonIntegralRejected) {
  EXPECT_THROW(check_wall_congruences(ParamCubic(Rational(5)).form(), {0, 0, 0}), IntegralityError);
}

TEST(SmallCube, FamilyCertificate) {
  WallData w = WallData::from_family(12, Rational(5), {0, 0, 0}, 6);
  SmallCubeResult r = small_cube_search(w.mu, 50, w.family);
  EXPECT_TRUE(r.certified_empty);
  EXPECT_EQ(r.modulus, 12);
  EXPECT_FALSE(r.searched);
  SmallCubeResult g = small_cube_search(w.mu, 50);
  EXPECT_TRUE(g.certified_empty);
  EXPECT_EQ(g.modulus % 12, 0);
}

TEST(SmallCube, ZeroFormIsEmpty) {
  SmallCubeResult r = small_cube_search(int_form({}));
  EXPECT_TRUE(r.certified_empty);
  EXPECT_TRUE(r.found.empty());
}

TEST(SmallCube, FindsConstructedClass) {
  std::array<long long, 10> v{5, 0, 0, 0, 0, 0, 10, 0, 0, 10};
  SmallCubeResult r = small_cube_search(int_form(v), 3);
  EXPECT_TRUE(r.searched);
  EXPECT_FALSE(r.certified_empty);
  EXPECT_NE(std::find(r.found.begin(), r.found.end(), IVec3{1, 0, 0}), r.found.end());
  Table t(v);
  std::size_t expect = 0;
  for (long long a = -3; a <= 3; ++a)
    for (long long b = -3; b <= 3; ++b)
      for (long long c = -3; c <= 3; ++c) {
        IVec3 e{a, b, c};
        long long x = t(e, e, e);
        expect += x >= 1 && x <= 9;
      }
  EXPECT_EQ(r.found.size(), expect);
  for (const IVec3& e : r.found) {
    long long x = t(e, e, e);
    EXPECT_TRUE(x >= 1 && x <= 9);
  }
}

TEST(C2Min, K5Diagonal) {
  C2Min m = minimize_c2_on_bounded(Rational(5), {1, 1, -2});
  EXPECT_NEAR(m.min, dense_min(5, {1, 1, -2}), 1e-8);
  EXPECT_NEAR(m.argmin[0], m.argmin[1], 1e-6);
  EXPECT_LT(std::fabs(test::family_display(5.0, m.argmin)), 1e-9);
  EXPECT_EQ(minimize_c2_on_bounded(Rational(5), {0, 0, 3}).min, 3);
  EXPECT_THROW(minimize_c2_on_bounded(Rational(1, 2), {1, 1, 1}), PreconditionError);
  EXPECT_THROW(minimize_c2_on_bounded(Rational(1), {1, 1, 1}), PreconditionError);
}

TEST(C2Min, AgreesWithDenseScanAtK5) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> c(-5, 5);
  for (int n = 0; n < 20; ++n) {
    Vec3d c2{double(c(rng)), double(c(rng)), double(c(rng))};
    if (c2[0] == 0 && c2[1] == 0) c2[1] = -1;
    EXPECT_NEAR(minimize_c2_on_bounded(Rational(5), c2).min, dense_min(5, c2), 1e-8)
        << c2[0] << "," << c2[1] << "," << c2[2];
  }
}

TEST(C2Min, AgreesWithDenseScanAcrossK) {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> c(-5, 5), num(11, 100);
  for (int n = 0; n < 20; ++n) {
    Rational k = rational(num(rng), 10);
    Vec3d c2{double(c(rng)), double(c(rng)), double(c(rng))};
    if (c2[0] == 0 && c2[1] == 0) c2[0] = 1;
    double got = minimize_c2_on_bounded(k, c2).min;
    double want = dense_min(to_double(k), c2);
    EXPECT_NEAR(got, want, 1e-8) << to_string(k) << " " << c2[0] << "," << c2[1] << "," << c2[2];
    EXPECT_LE(got, want + 1e-12);
  }
}

TEST(Verdict, Examples) {
  EXPECT_EQ(decide_obstruction(WallData::from_family(12, Rational(5), {0, 0, 0}, 6)).kind,
            VerdictKind::NoCY_C2NotPositive);
  Verdict raw = decide_obstruction(WallData::from_family(1, Rational(5), {0, 0, 0}, 6));
  EXPECT_EQ(raw.kind, VerdictKind::InvalidWallData);
  EXPECT_NE(raw.reason.find("mu123=3/2"), std::string::npos);
  EXPECT_EQ(decide_obstruction(WallData::from_family(12, Rational(-3), {0, 0, 0}, 6)).kind,
            VerdictKind::NoCY_OneRealComponent);
  Verdict neg = decide_obstruction(WallData::from_c2_direction(12, Rational(5), {1, 1, -2}, 6));
  EXPECT_EQ(neg.kind, VerdictKind::NoCY_C2NotPositive);
  EXPECT_LT(neg.witnesses["c2_min"].get<double>(), 0);
  EXPECT_EQ(decide_obstruction(WallData::from_c2_direction(12, Rational(5), {0, 0, 1}, 6)).kind,
            VerdictKind::NecessaryConditionsPass);
  EXPECT_EQ(decide_obstruction(WallData::from_family(12, Rational(5), {2, 0, 0}, 6)).kind,
            VerdictKind::InvalidWallData);
  EXPECT_EQ(decide_obstruction(WallData::from_family(12, Rational(1), {0, 0, 0}, 6)).kind,
            VerdictKind::UnknownOutsideScope);
}

TEST(Verdict, NonFamilyInput) {
  WallData one = WallData::from_family(12, Rational(-3), {0, 0, 0}, 6);
  one.family.reset();
  EXPECT_EQ(decide_obstruction(one).kind, VerdictKind::NoCY_OneRealComponent);
  WallData two = WallData::from_family(12, Rational(5), {0, 0, 0}, 6);
  two.family.reset();
  EXPECT_EQ(decide_obstruction(two).kind, VerdictKind::UnknownOutsideScope);
  WallData small(int_form({6, 0, 0, 0, 0, 0, 6, 0, 0, 6}), {0, 0, 0}, 0);
  Verdict vs = decide_obstruction(small);
  EXPECT_EQ(vs.kind, VerdictKind::UnknownOutsideScope) << vs.reason;
}

TEST(Verdict, WitnessBundles) {
  Verdict one = decide_obstruction(WallData::from_family(12, Rational(-3), {0, 0, 0}, 6));
  EXPECT_EQ(one.witnesses["real_components"], 1);
  EXPECT_EQ(one.witnesses["sign_pattern_hash"].get<std::string>().size(), 16u);
  Verdict neg = decide_obstruction(WallData::from_c2_direction(12, Rational(5), {1, 1, -2}, 6));
  ASSERT_TRUE(neg.witnesses.contains("argmin"));
  auto am = neg.witnesses["argmin"];
  Vec3d p{am[0].get<double>(), am[1].get<double>(), am[2].get<double>()};
  // c2 = 12 (1, 1, -2) evaluated at the witness is the reported minimum.
  EXPECT_NEAR(12 * (p[0] + p[1] - 2 * p[2]), neg.witnesses["c2_min"].get<double>(), 1e-9);
  EXPECT_LT(std::fabs(test::family_display(5.0, p)), 1e-9);
}

TEST(Verdict, ScalingInvariance) {
  for (IVec3 c2 : {IVec3{1, 1, -2}, IVec3{0, 0, 1}})
    EXPECT_EQ(decide_obstruction(WallData::from_c2_direction(12, Rational(5), c2, 6)).kind,
              decide_obstruction(WallData::from_c2_direction(24, Rational(5), c2, 6)).kind);
}

TEST(Verdict, JsonRoundTrip) {
  Verdict v = decide_obstruction(WallData::from_c2_direction(12, Rational(5), {1, 1, -2}, 6));
  nlohmann::json j = nlohmann::json::parse(v.to_json().dump());
  for (const char* key : {"verdict", "reason", "assumptions", "witnesses", "inputs_hash"}) EXPECT_TRUE(j.contains(key));
  EXPECT_EQ(j["verdict"], "NoCY_C2NotPositive");
  EXPECT_EQ(j["inputs_hash"].get<std::string>().size(), 16u);
  EXPECT_EQ(Verdict::from_json(j), v);
  EXPECT_THROW(Verdict::from_json(nlohmann::json{{"verdict", "Maybe"}}), ParseError);
}

TEST(Verdict, HashTracksInputs) {
  WallData a = WallData::from_family(12, Rational(5), {0, 0, 0}, 6);
  WallData b = WallData::from_family(12, Rational(5), {0, 0, 0}, 8);
  EXPECT_EQ(decide_obstruction(a).inputs_hash, decide_obstruction(a).inputs_hash);
  EXPECT_NE(decide_obstruction(a).inputs_hash, decide_obstruction(b).inputs_hash);
}

TEST(WallDataJson, RoundTripAndErrors) {
  WallData w = WallData::from_c2_direction(12, Rational(5), {1, 1, -2}, 6);
  EXPECT_EQ(WallData::from_json(nlohmann::json::parse(w.to_json().dump())), w);
  WallData plain(int_form({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), {2, 4, 6}, 0);
  EXPECT_EQ(WallData::from_json(plain.to_json()), plain);
  EXPECT_THROW(WallData::from_json(nlohmann::json{{"mu", {"1"}}, {"p1", {0, 0, 0}}, {"b3", 0}}), ParseError);
  EXPECT_THROW(WallData(int_form({}), {0, 0, 0}, 3), PreconditionError);
  EXPECT_THROW(WallData(int_form({}), {0, 0, 0}, -2), PreconditionError);
}

TEST(Generate, Examples) {
  WallData a = generate_no_cy_example(Rational(-3), 12, 6);
  EXPECT_EQ(decide_obstruction(a).kind, VerdictKind::NoCY_OneRealComponent);
  EXPECT_TRUE(check_wall_congruences(a.mu, a.p1).ok);
  WallData b = generate_no_cy_example(Rational(5), 12, 6);
  EXPECT_EQ(decide_obstruction(b).kind, VerdictKind::NoCY_C2NotPositive);
  WallData c = generate_no_cy_example(Rational(-1), 10, 0, {5, 7, 11});
  EXPECT_EQ(decide_obstruction(c).kind, VerdictKind::NoCY_OneRealComponent);
  EXPECT_THROW(generate_no_cy_example(Rational(5), 12, 3), PreconditionError);
  EXPECT_THROW(generate_no_cy_example(Rational(5), 8, 6), PreconditionError);
  EXPECT_THROW(generate_no_cy_example(Rational(5), 11, 6), PreconditionError);
  EXPECT_THROW(generate_no_cy_example(Rational(1, 2), 12, 6), PreconditionError);
  EXPECT_THROW(generate_no_cy_example(Rational(0), 12, 6), PreconditionError);
  EXPECT_THROW(generate_no_cy_example(Rational(-2), 12, 6), PreconditionError);
}
