#include <gtest/gtest.h>

#include <sstream>

#include "coarsedim/covers/cube.hpp"
#include "coarsedim/covers/lattice.hpp"
#include "coarsedim/covers/reflection.hpp"
#include "coarsedim/covers/report.hpp"
#include "oracles.hpp"

using namespace coarsedim;

namespace {

std::vector<std::vector<std::size_t>> classes_of(const Cover& c) { return c.classes; }

}  // namespace

TEST(LatticeCover, OneDimensionalUnitScale) {
  const auto c = lattice_cover(1, Rational(1), LatticeWindow::cube(1, 0, 40));
  ASSERT_EQ(c.cover.classes.size(), 2u);
  // Intervals of length 2, gaps of 2, offsets 0 and 2.
  EXPECT_EQ(c.cover.classes[0].front(), 0u);
  EXPECT_EQ(c.cover.classes[0][1], 1u);
  EXPECT_EQ(c.cover.classes[0][2], 4u);
  EXPECT_EQ(c.cover.classes[1].front(), 2u);
  // Neighbors at distance exactly 1 = s do not join, so components are points.
  EXPECT_EQ(c.max_component_diameter, 0);
  const auto dist = [&](std::size_t a, std::size_t b) { return Rational(l1_distance(c.points[a], c.points[b])); };
  EXPECT_EQ(oracle::component_bound(classes_of(c.cover), Rational(1), dist), Rational(0));
  EXPECT_EQ(oracle::component_bound(classes_of(c.cover), Rational(3, 2), dist), Rational(1));
}

TEST(LatticeCover, OneDimensionalComponentsBelowTwoS) {
  for (std::int64_t s : {1, 2, 3, 5, 8}) {
    const auto c = lattice_cover(1, Rational(s), LatticeWindow::cube(1, -50, 120));
    EXPECT_LE(c.max_component_diameter, 2 * s - 1) << s;
    EXPECT_LT(Rational(c.max_component_diameter), Rational(4 * s));
  }
}

TEST(LatticeCover, TwoAndThreeDimensionsCertify) {
  const auto c2 = lattice_cover(2, Rational(1), LatticeWindow::cube(2, 0, 30));
  EXPECT_EQ(c2.cover.classes.size(), 3u);
  EXPECT_LE(Rational(c2.max_component_diameter), Rational(6));
  for (const Rational s : {Rational(2), Rational(5, 2), Rational(4)})
    EXPECT_NO_THROW(lattice_cover(2, s, LatticeWindow::cube(2, -20, 25)));
  for (const Rational s : {Rational(1), Rational(2), Rational(3)})
    EXPECT_NO_THROW(lattice_cover(3, s, LatticeWindow::cube(3, -6, 14)));
}

TEST(LatticeCover, BudgetAndArguments) {
  EXPECT_THROW(lattice_cover(2, Rational(1), LatticeWindow::cube(2, 0, 400)), ResourceError);
  EXPECT_THROW(lattice_cover(0, Rational(1), LatticeWindow::cube(1, 0, 4)), InvalidArgument);
  EXPECT_THROW(lattice_cover(1, Rational(0), LatticeWindow::cube(1, 0, 4)), InvalidArgument);
}

TEST(LatticeCover, MatchesOracleOnSmallWindow) {
  const auto c = lattice_cover(2, Rational(3, 2), LatticeWindow::cube(2, -4, 7));
  const auto dist = [&](std::size_t a, std::size_t b) { return Rational(l1_distance(c.points[a], c.points[b])); };
  EXPECT_EQ(Rational(c.max_component_diameter), oracle::component_bound(c.cover.classes, Rational(3, 2), dist));
}

TEST(L1Diameter, MatchesPairwise) {
  std::vector<LatticePoint> pts{{0, 0, 0}, {3, -1, 2}, {-2, 4, 1}, {1, 1, -5}};
  std::int64_t best = 0;
  for (const auto& a : pts)
    for (const auto& b : pts) best = std::max(best, l1_distance(a, b));
  EXPECT_EQ(l1_diameter(pts), best);
}

TEST(ReflectionCover, CyclicLatticeMatchesWordNorm) {
  const CyclicLattice z(5, 2);
  const auto summand = SummandSpec::cyclic_power(5, 2);
  for (std::size_t p = 0; p < z.size(); ++p) EXPECT_EQ(z.distance(0, p), summand.norm().at(p));
}

TEST(ReflectionCover, OneDimensionalReflections) {
  const CyclicLattice z(7, 1);
  for (std::size_t p = 0; p < 7; ++p) {
    EXPECT_EQ(z.reflect(p, 1), p);               // lambda = {1}: identity
    EXPECT_EQ(z.reflect(p, 0), (7 - p) % 7);     // lambda = empty: negation
  }
}

TEST(ReflectionCover, IsometriesExhaustive) {
  for (std::size_t n : {1u, 2u})
    for (std::size_t k = 2; k <= 9; ++k) EXPECT_FALSE(check_reflection_isometries(n, k).has_value()) << n << k;
}

TEST(ReflectionCover, SeparationOfReflectedComponents) {
  for (std::size_t n : {1u, 2u})
    for (std::size_t k : {3u, 5u, 7u, 9u})
      for (std::int64_t s = 1; s <= 4; ++s) {
        const auto v = check_reflection_separation(n, k, Rational(s));
        EXPECT_FALSE(v.has_value()) << n << " " << k << " " << s << " " << (v ? v->detail : "");
      }
}

TEST(ReflectionCover, BoundsForSpecExamples) {
  const auto a = reflection_cover(1, 7, Rational(2));
  EXPECT_EQ(a.ratio, 10);
  EXPECT_LE(a.max_component_diameter, Rational(2 * 5 * 2));
  const auto b = reflection_cover(2, 9, Rational(1));
  EXPECT_EQ(b.ratio, 28);
  EXPECT_LE(b.max_component_diameter, Rational(28));
  const CyclicLattice z(9, 2);
  const auto dist = [&](std::size_t x, std::size_t y) { return z.distance(x, y); };
  EXPECT_EQ(b.max_component_diameter, oracle::component_bound(b.cover.classes, Rational(1), dist));
}

TEST(ReflectionCover, EvenModulusCovers) {
  for (std::size_t k : {2u, 4u, 6u, 8u})
    for (std::int64_t s = 1; s <= 4; ++s) EXPECT_NO_THROW(reflection_cover(2, k, Rational(s)));
}

TEST(DilatedCube, LinearMapOnZ2) {
  const auto cube = lattice_cube(2, 2, 2);
  EXPECT_EQ(cube.image.size(), 9u);
  const auto rep = verify_dilated_cube(cube, [](const LatticePoint& a, const LatticePoint& b) {
    return Rational(l1_distance(a, b));
  });
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.pairs_checked, 36u);
  auto bad = cube;
  bad.C = Rational(3);
  EXPECT_FALSE(verify_dilated_cube(bad, [](const LatticePoint& a, const LatticePoint& b) {
                 return Rational(l1_distance(a, b));
               }).pass);
}

TEST(DilatedCube, DirectSumCubesForThreeFiveSeven) {
  std::vector<SummandSpec> sm;
  for (std::size_t k : {3u, 5u, 7u}) sm.push_back(SummandSpec::cyclic_power(k, 2));
  const auto ds = TruncatedDirectSum::minimal(sm);
  const std::size_t ks[] = {3, 5, 7};
  for (std::size_t i = 1; i <= 3; ++i) {
    const auto cube = direct_sum_cube(ds, i, ks[i - 1], 2, 2, i);
    ASSERT_TRUE(cube.has_value());
    EXPECT_EQ(cube->C, ds.scales().at(i));
    EXPECT_TRUE(verify_dilated_cube(*cube, [&](std::size_t a, std::size_t b) { return ds.distance(a, b); }).pass);
  }
  // Side beyond r breaks the cyclic wrap.
  EXPECT_FALSE(direct_sum_cube(ds, 2, 5, 2, 2, 3).has_value());
}

TEST(DilatedCube, GenericSearch) {
  EXPECT_FALSE(find_dilated_cube(cyclic_word_metric(3), 1, 3).has_value());
  const auto line = integer_interval(0, 6);
  const auto c = find_dilated_cube(line, 1, 3);
  ASSERT_TRUE(c.has_value());
  EXPECT_TRUE(verify_dilated_cube(*c, [&](std::size_t a, std::size_t b) { return line.distance(a, b); }).pass);
  // Z_8: a 1-cube of side 4 exists (0..4), of side 5 it cannot (wraps).
  EXPECT_TRUE(find_dilated_cube(cyclic_word_metric(8), 1, 4).has_value());
  EXPECT_FALSE(find_dilated_cube(cyclic_word_metric(8), 1, 5).has_value());
}

TEST(DilatedCube, ProductFamilyEqualConstants) {
  const auto ds = TruncatedDirectSum::minimal({SummandSpec::cyclic_power(3, 1), SummandSpec::cyclic_power(5, 1),
                                               SummandSpec::cyclic_power(7, 1)});
  for (std::size_t i = 1; i <= 3; ++i) {
    const auto cube = product_cube(ds, i, 2 * i + 1, 1, 1, 1, 4);
    ASSERT_TRUE(cube.has_value());
    EXPECT_EQ(cube->n, 2u);
    EXPECT_EQ(cube->side, i);
    EXPECT_TRUE(verify_dilated_cube(*cube, [&](const ProductPoint& a, const ProductPoint& b) {
                  return product_distance(ds, a, b);
                }).pass);
  }
}

TEST(DimensionReport, DirectSumFamily) {
  FamilyDescriptor f;
  f.moduli = {3, 5};
  f.n = 2;
  const auto rep = dimension_report(f, {Rational(1), Rational(2), Rational(5, 2), Rational(4), Rational(12),
                                        Rational(13)});
  ASSERT_EQ(rep.upper.size(), 6u);
  EXPECT_TRUE(rep.pass());
  ASSERT_EQ(rep.lower.size(), 4u);
  EXPECT_EQ(rep.lower[2].dimension, 2u);
  EXPECT_EQ(rep.lower[3].side, 2u);
  std::ostringstream a, b;
  write_upper_csv(a, rep.upper);
  write_lower_csv(b, rep.lower);
  EXPECT_EQ(a.str().substr(0, 6), "scale,");
  EXPECT_NE(b.str().find("2,2,2,3/1,pass"), std::string::npos);
}

TEST(DimensionReport, EmptyScalesAndUnknownFamily) {
  FamilyDescriptor f;
  f.moduli = {3};
  EXPECT_TRUE(dimension_report(f, {}).upper.empty());
  f.kind = "torus";
  EXPECT_THROW(dimension_report(f, {Rational(1)}), InvalidArgument);
}

TEST(DimensionReport, ProductFamily) {
  FamilyDescriptor f;
  f.kind = "product";
  f.moduli = {3, 5, 7};
  f.n = 1;
  f.lattice_dim = 1;
  f.lattice_side = 2;
  const auto rep = dimension_report(f, {Rational(1)});
  EXPECT_TRUE(rep.upper.empty());
  ASSERT_EQ(rep.lower.size(), 3u);
  EXPECT_EQ(rep.lower[2].side, 2u);
  EXPECT_TRUE(rep.pass());
}
