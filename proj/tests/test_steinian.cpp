#include <gtest/gtest.h>

#include <random>

#include "ccl/steinian.hpp"
#include "support/oracles.hpp"

using namespace ccl;

namespace {

const Rational k5(5);
const char* kRegimes[] = {"5", "2", "1/2", "-1", "-3"};

/// Distance from a ray to the nearest vertex of a trace.
double distance_to(const Polyline& pl, const Vec3d& p) {
  double best = 1e9;
  for (const Vec3d& r : pl.rays) best = std::min(best, test::ray_distance(r, p));
  return best;
}

}  // namespace

TEST(Steinian, InflexionsGoToTangencyPoints) {
  for (const char* ks : kRegimes) {
    Rational k = parse_rational(ks);
    auto q = asymptote_tangency_points(k);
    auto b = inflexion_points();
    for (int i = 0; i < 3; ++i) {
      EXPECT_EQ(steinian(k, b[i]), canonical_ray(q[i])) << ks << " i=" << i;
      EXPECT_EQ(steinian(k, q[i]), canonical_ray(b[i])) << ks << " i=" << i;
    }
  }
  // For k = 5, Q1 lies in x < 0, y > 0, x + y < 1.
  Vec3q q1 = steinian(k5, Vec3q{0, 1, 0});
  EXPECT_LT(q1[0], 0);
  EXPECT_GT(q1[1], 0);
  EXPECT_LT(q1[0] + q1[1], 1);
  EXPECT_EQ(steinian(k5, Vec3q{Rational(5, 8), Rational(5, 8), 1}), canonical_ray(Vec3q{1, -1, 0}));
}

TEST(Steinian, FloatPathMatchesExact) {
  Vec3d r = steinian(k5, Vec3d{0, 1, 0});
  EXPECT_LT(test::ray_distance(r, to_double(steinian(k5, Vec3q{0, 1, 0}))), 1e-12);
}

TEST(Steinian, InvolutionOnTracedPoints) {
  for (const char* ks : kRegimes) {
    Rational k = parse_rational(ks);
    std::vector<Vec3d> pts;
    for (const BranchSpec& s : branch_specs(k, CurveKind::Hessian)) {
      Polyline pl = trace_branch(k, s.id, 400);
      for (std::size_t i = 1; i + 1 < pl.size(); i += 2) pts.push_back(pl.rays[i]);
    }
    ASSERT_GE(pts.size(), 200u) << ks;
    pts.resize(200);
    for (const Vec3d& u : pts) {
      Vec3d a = steinian(k, u);
      EXPECT_LT(test::ray_distance(steinian(k, a), u), 1e-8) << ks;
    }
  }
}

TEST(Steinian, SingularPointOfPolarConic) {
  std::mt19937_64 rng(3);
  for (const char* ks : kRegimes) {
    Rational k = parse_rational(ks);
    Polyline pl = trace_branch(k, branch_specs(k, CurveKind::Hessian)[0].id, 300);
    TrilinearForm mu = ParamCubic(k).form();
    for (int n = 0; n < 40; ++n) {
      Vec3d u = normalized(pl.rays[1 + rng() % (pl.size() - 2)]);
      Vec3d a = normalized(steinian(k, u));
      // Gradient of D -> G_U(D) at alpha(U) is 2 M(U) alpha(U).
      SymMat3d m = polar_matrix(mu, u);
      Vec3d g{0, 0, 0};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g[i] += m(i, j) * a[j];
      EXPECT_LT(norm(g), 1e-7 * m.max_abs()) << ks;
      // U . alpha(U)^2 = 0 and alpha(U) . U^2 = 0.
      EXPECT_NEAR(mu(u, a, a), 0, 1e-7 * m.max_abs());
      EXPECT_NEAR(mu(a, u, u), 0, 1e-7 * m.max_abs());
    }
  }
}

TEST(Steinian, ComponentBehaviour) {
  // alpha keeps the Hessian oval for 0 < k < 1 and swaps it with the
  // unbounded component for k < 0.
  for (const char* ks : {"1/2", "-1", "-3"}) {
    Rational k = parse_rational(ks);
    Polyline oval = trace_branch(k, {CurveKind::Hessian, "boundedOval"}, 2048);
    bool keep = k > 0;
    for (std::size_t i = 0; i < oval.size(); i += 41) {
      Vec3d a = steinian(k, oval.rays[i]);
      double d = distance_to(oval, a);
      if (keep)
        EXPECT_LT(d, 1e-2) << ks;
      else
        EXPECT_GT(d, 1e-2) << ks;
    }
  }
}

TEST(Steinian, Errors) {
  EXPECT_THROW(steinian(k5, Vec3d{0, 0, 1}), PreconditionError);
  EXPECT_THROW(steinian(k5, Vec3q{0, 0, 1}), PreconditionError);
  EXPECT_THROW(steinian(Rational(0), Vec3q{0, 1, 0}), DegenerateParameter);
  EXPECT_THROW(steinian(Rational(-2), Vec3q{0, 1, 0}), DegenerateParameter);
}

TEST(SpecialPoints, K5) {
  SpecialPoints sp = special_points(k5);
  EXPECT_EQ(canonical_ray(sp.Q3), (Vec3q{Rational(5, 8), Rational(5, 8), 1}));
  ASSERT_TRUE(sp.R);
  EXPECT_LT(test::ray_distance(*sp.R, Vec3d{0.625, 0.625, 1}), 1e-15);
  EXPECT_FALSE(sp.e);
  EXPECT_FALSE(sp.Rprime);
  for (long k : {2, 3, 7}) {
    Rational kk(k);
    EXPECT_EQ(canonical_ray(special_points(kk).Q3), (Vec3q{Rational(kk / (2 * (kk - 1))), Rational(kk / (2 * (kk - 1))), 1}));
  }
}

TEST(SpecialPoints, KMinusOne) {
  Rational k(-1);
  SpecialPoints sp = special_points(k);
  ASSERT_TRUE(sp.e);
  auto e = *sp.e;
  EXPECT_LT(e[0], e[1]);
  EXPECT_LT(e[1], e[2]);
  EXPECT_NEAR(e[1], 0.5, 1e-12);  // k / (k - 1)
  ASSERT_TRUE(sp.kparams);
  auto ks = *sp.kparams;
  int low = 0, mid = 0, unit = 0;
  for (double v : ks) {
    low += v < -2;
    mid += v > -2 && v < 0;
    unit += v > 0 && v < 1;
    EXPECT_NEAR(to_double(test::dual_display(Rational(v))), to_double(test::dual_display(k)), 1e-9);
  }
  EXPECT_EQ(low, 1);
  EXPECT_EQ(mid, 1);
  EXPECT_EQ(unit, 1);
  EXPECT_NEAR(ks[1], -1, 1e-12);
  ASSERT_TRUE(sp.R && sp.Rprime);
  EXPECT_NEAR((*sp.R)[0], e[2] / 2, 1e-12);
  EXPECT_NEAR((*sp.Rprime)[0], e[0] / 2, 1e-12);
}

TEST(SpecialPoints, RAndRprimeOnHessianAndPaired) {
  for (const char* ks : {"-1", "-1/2", "-3", "-10"}) {
    Rational k = parse_rational(ks);
    SpecialPoints sp = special_points(k);
    ASSERT_TRUE(sp.R && sp.Rprime);
    double kd = to_double(k);
    double hs = hessian_curve(k).local_scale(*sp.R);
    EXPECT_LT(std::fabs(test::hessian_display(kd, *sp.R)), 1e-9 * hs) << ks;
    EXPECT_LT(std::fabs(test::hessian_display(kd, *sp.Rprime)), 1e-9 * hessian_curve(k).local_scale(*sp.Rprime));
    EXPECT_LT(test::ray_distance(steinian(k, *sp.R), *sp.Rprime), 1e-7) << ks;
    // R is the diagonal point of the bounded component other than Q3.
    EXPECT_GT(test::ray_distance(*sp.R, to_double(sp.Q3)), 1e-6) << ks;
  }
  SpecialPoints half = special_points(Rational(1, 2));
  EXPECT_FALSE(half.Rprime);
  EXPECT_THROW(special_points(Rational(0)), DegenerateParameter);
}

TEST(SecondPolar, InflexionsGiveAsymptotes) {
  TrilinearForm mu = ParamCubic(k5).form();
  LineQ l3 = second_polar_line(mu, Vec3q{1, -1, 0});
  EXPECT_TRUE(cross(l3.c, Vec3q{4, 4, -5}).is_zero());
  LineQ l1 = second_polar_line(mu, Vec3q{0, 1, 0});
  EXPECT_TRUE(cross(l1.c, Vec3q{4, 0, 1}).is_zero());
  EXPECT_THROW(second_polar_line(mu, Vec3q{0, 0, 0}), DegeneratePolar);
}

TEST(SecondPolar, IsHessianTangentAtAlpha) {
  // The second polar of U' is the tangent to H at alpha(U').
  std::mt19937_64 rng(5);
  Polyline pl = trace_branch(k5, {CurveKind::Hessian, "C2"}, 400);
  PlaneCurve h = hessian_curve(k5);
  for (int n = 0; n < 30; ++n) {
    Vec3d up = normalized(pl.rays[1 + rng() % (pl.size() - 2)]);
    Vec3d u = normalized(steinian(k5, up));
    LineD polar = second_polar_line(ParamCubic(k5).form(), up);
    LineD tan = tangent_line_at(h, u);
    EXPECT_LT(test::ray_distance(polar.c, tan.c), 1e-6);
  }
}

TEST(ThirdIntersection, InflexionsAreCollinear) {
  auto r = third_intersection(k5, Vec3q{0, 1, 0}, Vec3q{1, 0, 0});
  EXPECT_TRUE(cross(r.point, Vec3q{1, -1, 0}).is_zero());
  EXPECT_FALSE(r.tangent);
}

TEST(ThirdIntersection, TangentsAtUAndAlphaU) {
  std::mt19937_64 rng(11);
  PlaneCurve h = hessian_curve(k5);
  Polyline pl = trace_branch(k5, {CurveKind::Hessian, "C2"}, 400);
  int done = 0;
  while (done < 50) {
    Vec3d u = normalized(pl.rays[1 + rng() % (pl.size() - 2)]);
    Vec3d up = normalized(steinian(k5, u));
    if (test::ray_distance(u, up) < 1e-3) continue;
    ThirdPoint<double> t = third_intersection(k5, u, up);
    if (t.tangent) continue;
    Vec3d meet = cross(tangent_line_at(h, u).c, tangent_line_at(h, up).c);
    EXPECT_LT(test::ray_distance(meet, steinian(k5, t.point)), 1e-7);
    ++done;
  }
}

TEST(ThirdIntersection, TangentLineResidual) {
  // On the tangent at U the third Hessian point is the residual intersection.
  PlaneCurve h = hessian_curve(k5);
  Vec3q q3{Rational(5, 8), Rational(5, 8), 1};
  LineQ t = tangent_line_at(h, q3);
  auto pts = line_cubic_intersections(t, h.exact());
  ASSERT_EQ(pts.size(), 2u);
  for (const auto& p : pts) {
    if (p.multiplicity == 2) EXPECT_EQ(canonical_ray(*p.exact), q3);
    if (p.multiplicity == 1) {
      auto r = third_intersection(k5, q3, *p.exact);
      EXPECT_TRUE(r.tangent);
    }
  }
}

TEST(ThirdIntersection, Errors) {
  EXPECT_THROW(third_intersection(k5, Vec3q{0, 0, 1}, Vec3q{1, 0, 0}), PreconditionError);
  EXPECT_THROW(third_intersection(k5, Vec3q{0, 1, 0}, Vec3q{0, 2, 0}), PreconditionError);
}
