#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "coarsedim/metric/components.hpp"
#include "coarsedim/metric/space.hpp"
#include "oracles.hpp"

using namespace coarsedim;

namespace {

std::vector<std::size_t> iota_vec(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

// Random finite metric: shortest paths on a random weighted complete graph.
FiniteMetricSpace random_metric(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> w(1, 12);
  std::vector<std::vector<std::int64_t>> d(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = w(rng);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return FiniteMetricSpace::from_function(n, [&](std::size_t i, std::size_t j) { return Rational(d[i][j], 2); });
}

}  // namespace

TEST(ScaleComponents, CyclicWrapJoinsEnds) {
  // Z_7 with residues: -3..3 correspond to 4,5,6,0,1,2,3.
  const auto z7 = cyclic_word_metric(7);
  const std::vector<std::size_t> subset{4, 5, 2, 3};  // -3, -2, 2, 3
  const auto parts = scale_components(z7, subset, Rational(2));
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0], (std::vector<std::size_t>{2, 3, 4, 5}));
}

TEST(ScaleComponents, LargeScaleGivesOneComponent) {
  const auto space = integer_interval(0, 9);
  EXPECT_EQ(scale_components(space, Rational(10)).size(), 1u);
}

TEST(ScaleComponents, SingletonAndEmpty) {
  const auto space = integer_interval(0, 4);
  const std::vector<std::size_t> one{3};
  const auto parts = scale_components(space, one, Rational(1, 2));
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0], one);
  EXPECT_TRUE(scale_components(space, std::vector<std::size_t>{}, Rational(1)).empty());
}

TEST(ScaleComponents, TiesDoNotJoin) {
  const auto space = integer_interval(0, 3);
  EXPECT_EQ(scale_components(space, Rational(1)).size(), 4u);
  EXPECT_EQ(scale_components(space, Rational(1001, 1000)).size(), 1u);
}

TEST(ScaleComponents, NonPositiveScaleRejected) {
  const auto space = integer_interval(0, 3);
  EXPECT_THROW(scale_components(space, Rational(0)), InvalidArgument);
  EXPECT_THROW(scale_components(space, Rational(-1)), InvalidArgument);
}

TEST(ScaleComponents, PartitionAndOracleAgreementOnRandomSpaces) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 2 + rng() % 11;
    const auto space = random_metric(n, rng);
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < n; ++i)
      if (rng() % 3) subset.push_back(i);
    const Rational s(1 + static_cast<std::int64_t>(rng() % 10), 2);
    const auto parts = scale_components(space, subset, s);
    std::vector<std::size_t> flat;
    for (const auto& p : parts) flat.insert(flat.end(), p.begin(), p.end());
    std::sort(flat.begin(), flat.end());
    EXPECT_EQ(flat, subset);
    const auto expected =
        oracle::chain_components(subset, s, [&](std::size_t a, std::size_t b) { return space.distance(a, b); });
    EXPECT_EQ(parts, expected);
  }
}

TEST(ScaleComponents, CoarserScaleMergesParts) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    const auto space = random_metric(10, rng);
    const Rational s(1 + static_cast<std::int64_t>(rng() % 6), 2);
    const Rational s2 = s + Rational(static_cast<std::int64_t>(rng() % 4), 2);
    const auto fine = scale_components(space, s);
    const auto coarse = scale_components(space, s2);
    std::vector<std::size_t> label(10);
    for (std::size_t c = 0; c < coarse.size(); ++c)
      for (std::size_t p : coarse[c]) label[p] = c;
    for (const auto& part : fine)
      for (std::size_t p : part) EXPECT_EQ(label[p], label[part.front()]);
  }
}

TEST(ScaleComponents, NeighborVariantMatchesAllPairs) {
  const auto space = integer_interval(0, 30);
  std::vector<std::size_t> subset;
  for (std::size_t i = 0; i <= 30; ++i)
    if (i % 7 != 3) subset.push_back(i);
  const auto neighbors = [](std::size_t p, auto&& visit) {
    if (p > 0) visit(p - 1);
    visit(p + 1);
  };
  EXPECT_EQ(scale_components_by_neighbors(space, subset, Rational(3, 2), neighbors),
            scale_components(space, subset, Rational(3, 2)));
}

TEST(ComponentBound, IntervalTwoHalves) {
  const auto space = integer_interval(0, 9);
  Cover cover{{{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}}};
  EXPECT_EQ(component_diameter_bound(space, cover, Rational(1, 1)).diameter, Rational(0));
  EXPECT_EQ(component_diameter_bound(space, cover, Rational(2, 1)).diameter, Rational(4));
}

TEST(ComponentBound, WholeSpaceAndSingletons) {
  const auto space = integer_interval(0, 9);
  Cover whole{{iota_vec(10)}};
  EXPECT_EQ(component_diameter_bound(space, whole, Rational(20)).diameter, Rational(9));
  Cover singles;
  for (std::size_t i = 0; i < 10; ++i) singles.classes.push_back({i});
  EXPECT_EQ(component_diameter_bound(space, singles, Rational(100)).diameter, Rational(0));
}

TEST(ComponentBound, UncoveredPointIsNamed) {
  const auto space = integer_interval(0, 4);
  Cover cover{{{0, 1}, {3, 4}}};
  try {
    component_diameter_bound(space, cover, Rational(1));
    FAIL() << "expected InvalidCover";
  } catch (const InvalidCover& e) {
    EXPECT_EQ(e.point(), 2u);
  }
}

TEST(ComponentBound, OracleAgreementOnRandomCovers) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 3 + rng() % 10;
    const auto space = random_metric(n, rng);
    Cover cover{std::vector<std::vector<std::size_t>>(2)};
    for (std::size_t i = 0; i < n; ++i) cover.classes[rng() % 2].push_back(i);
    const Rational s(1 + static_cast<std::int64_t>(rng() % 8), 2);
    const auto expected = oracle::component_bound(cover.classes, s, [&](std::size_t a, std::size_t b) {
      return space.distance(a, b);
    });
    EXPECT_EQ(component_diameter_bound(space, cover, s).diameter, expected);
  }
}

TEST(FiniteMetricSpace, TextRoundTrip) {
  const auto space = cyclic_word_metric(5);
  std::stringstream ss;
  write_metric_space(ss, space);
  const auto back = read_metric_space(ss);
  ASSERT_EQ(back.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(back.distance(i, j), space.distance(i, j));
}

TEST(FiniteMetricSpace, ParseRejectsTriangleViolation) {
  std::stringstream ss("points 3\n0 1 1/1\n1 2 1/1\n0 2 3/1\n");
  EXPECT_THROW(read_metric_space(ss), ParseError);
}

TEST(FiniteMetricSpace, ParseReportsLine) {
  std::stringstream ss("points 2\n# comment\n0 x 1\n");
  try {
    read_metric_space(ss);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(FiniteMetricSpace, AxiomCheckerFindsViolations) {
  const auto bad = make_oracle_metric<Rational>(3, [](std::size_t i, std::size_t j) {
    return (i + j == 2 && i != j) ? Rational(5) : Rational(1);
  });
  const auto v = check_metric_axioms(bad);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->axiom, "triangle");
  EXPECT_FALSE(check_metric_axioms(cyclic_word_metric(6)).has_value());
}

TEST(ScaleChain, StrictInequality) {
  const auto space = integer_interval(0, 5);
  EXPECT_TRUE(is_scale_chain(space, ScaleChain{Rational(2), {0, 1, 2, 3}}));
  EXPECT_FALSE(is_scale_chain(space, ScaleChain{Rational(1), {0, 1}}));
}
