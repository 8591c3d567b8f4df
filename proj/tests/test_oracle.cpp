#include <gtest/gtest.h>

#include "ccl/oracle.hpp"
#include "support/oracles.hpp"

using namespace ccl;

namespace {

bool positive_cell(const ScanCell& c) { return !c.boundary && c.sign_f > 0 && c.sig == Signature{1, 2, 0}; }

}  // namespace

TEST(GridScan, Trichotomy) {
  for (const char* ks : {"5", "2", "1/2", "-1", "-3", "-10"}) {
    ScanGrid g = grid_scan(parse_rational(ks), Window{}, 60);
    EXPECT_EQ(g.trichotomy_violations(), 0u) << ks;
  }
}

TEST(GridScan, SignaturesMatchDisplay) {
  for (const char* ks : {"5", "1/2", "-1"}) {
    Rational k = parse_rational(ks);
    ScanGrid g = grid_scan(k, Window{}, 40);
    for (const ScanCell& c : g.cells) {
      Vec3q p{Rational(c.a), Rational(c.b), Rational(1)};
      EXPECT_EQ(c.sign_f, sgn(test::family_display(k, p)));
      EXPECT_EQ(c.sign_h, sgn(test::hessian_display(k, p)));
      if (c.sign_h != 0) EXPECT_EQ(c.sig.pos, test::positive_eigen_count(k, p)) << ks << " " << c.a << "," << c.b;
    }
  }
}

TEST(GridScan, KHalfPositiveCubicImpliesIndex) {
  ScanGrid g = grid_scan(Rational(1, 2), Window{-20, 20, -20, 20}, 80);
  int seen = 0;
  for (const ScanCell& c : g.cells) {
    if (c.boundary || c.sign_f <= 0) continue;
    EXPECT_GT(c.sign_h, 0);
    EXPECT_EQ(c.sig, (Signature{1, 2, 0}));
    ++seen;
  }
  EXPECT_GT(seen, 100);
}

TEST(GridScan, NegativeDefiniteInsideHessianOval) {
  ScanGrid g = grid_scan(Rational(-1), Window{}, 80);
  int def = flood_components(g, [](const ScanCell& c) { return !c.boundary && c.sig == Signature{0, 3, 0}; });
  EXPECT_EQ(def, 1);
  for (const ScanCell& c : g.cells)
    if (c.sig == Signature{0, 3, 0}) EXPECT_LT(c.sign_h, 0);
}

TEST(GridScan, Errors) {
  EXPECT_THROW(grid_scan(Rational(5), Window{}, 1), PreconditionError);
  EXPECT_THROW(grid_scan(Rational(5), Window{1, 1, 0, 1}, 10), PreconditionError);
}

TEST(GridScan, CsvHeader) {
  std::string csv = grid_scan(Rational(5), Window{}, 3).to_csv();
  EXPECT_EQ(csv.rfind("# scan k=5 n=3\na,b,signF,signH,pos,neg,zero,boundary\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2 + 9);
}

TEST(Flood, AffineComponentCounts) {
  EXPECT_EQ(flood_components(grid_scan(Rational(5), Window{}, 120), positive_cell), 4);
  EXPECT_EQ(flood_components(grid_scan(Rational(-1), Window{}, 120), positive_cell), 3);
  EXPECT_EQ(flood_components(grid_scan(Rational(5), Window{}, 20), [](const ScanCell&) { return false; }), 0);
  EXPECT_EQ(flood_components(grid_scan(Rational(5), Window{}, 20), [](const ScanCell&) { return true; }), 1);
}

TEST(Sphere, CountsMatchEnumerationAndAreStable) {
  for (const char* ks : {"5", "2", "1/2", "-1", "-3"}) {
    Rational k = parse_rational(ks);
    int c6 = sphere_component_count(k, 6);
    EXPECT_EQ(c6, sphere_component_count(k, 7)) << ks;
    EXPECT_EQ(std::size_t(c6), enumerate_cone_components(k).size()) << ks;
  }
  EXPECT_THROW(sphere_component_count(Rational(5), 9), PreconditionError);
}
