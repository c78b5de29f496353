#include <gtest/gtest.h>

#include <sstream>

#include "coarsedim/direct_sum/direct_sum.hpp"
#include "coarsedim/direct_sum/pullback.hpp"
#include "coarsedim/covers/reflection.hpp"
#include "oracles.hpp"

using namespace coarsedim;

namespace {

std::vector<SummandSpec> cyclic_summands(std::vector<std::size_t> ks, std::size_t n) {
  std::vector<SummandSpec> out;
  for (std::size_t k : ks) out.push_back(SummandSpec::cyclic_power(k, n));
  return out;
}

std::vector<std::size_t> all_points(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

TEST(ScaleSequence, MinimalForThreeFiveSeven) {
  const auto s = ScaleSequence::minimal(cyclic_summands({3, 5, 7}, 2));
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s.at(1), Rational(1));
  EXPECT_EQ(s.at(2), Rational(3));
  EXPECT_EQ(s.at(3), Rational(13));
  EXPECT_EQ(s.at(4), Rational(79));
}

TEST(ScaleSequence, CheckedRejectsRecurrenceViolation) {
  const auto sm = cyclic_summands({3, 3}, 1);
  EXPECT_NO_THROW(ScaleSequence::checked(sm, {Rational(1), Rational(2), Rational(3)}));
  EXPECT_THROW(ScaleSequence::checked(sm, {Rational(1), Rational(1), Rational(3)}), InvalidArgument);
}

TEST(QuasiNorm, TopCoordinateOnly) {
  const auto sm = cyclic_summands({3, 3, 3}, 1);
  const auto sc = ScaleSequence::minimal(sm);
  EXPECT_EQ(sc.at(3), Rational(3));
  EXPECT_EQ(quasi_norm(sm, sc, DirectSumElement{}), Rational(0));
  EXPECT_EQ(quasi_norm(sm, sc, DirectSumElement(std::map<std::size_t, GroupElement>{{3, 1}})), Rational(3));
  EXPECT_EQ(quasi_norm(sm, sc, DirectSumElement(std::map<std::size_t, GroupElement>{{1, 2}, {3, 1}})), Rational(3));
}

TEST(QuasiNorm, TruncationAgreesWithElementFormula) {
  const auto sm = cyclic_summands({2, 3, 4}, 1);
  const auto ds = TruncatedDirectSum::minimal(sm);
  ASSERT_EQ(ds.size(), 24u);
  for (std::size_t p = 0; p < ds.size(); ++p) {
    EXPECT_EQ(ds.norm(p), quasi_norm(sm, ds.scales(), ds.to_element(p)));
    EXPECT_EQ(ds.from_element(ds.to_element(p)), p);
  }
}

TEST(QuasiNormAxioms, SmallTruncationsPass) {
  const auto a = TruncatedDirectSum::minimal(cyclic_summands({3, 3}, 1));
  EXPECT_EQ(a.size(), 9u);
  EXPECT_TRUE(verify_quasi_norm_axioms(a, 1000).pass);
  const auto b = TruncatedDirectSum::minimal(cyclic_summands({2, 3, 4}, 1));
  const auto rep = verify_quasi_norm_axioms(b, 1000, 5000);
  EXPECT_TRUE(rep.pass) << rep.axiom << " " << rep.counterexample;
}

TEST(QuasiNormAxioms, BudgetIsEnforced) {
  const auto a = TruncatedDirectSum::minimal(cyclic_summands({3, 3}, 1));
  EXPECT_THROW(verify_quasi_norm_axioms(a, 8), ResourceError);
}

TEST(QuasiNormAxioms, CorruptedScalesNegativeControl) {
  // s_2 = s_1 * diam(G_1) breaks the "+1"; the outcome is recorded, not required.
  auto sm = cyclic_summands({5, 5}, 1);
  const TruncatedDirectSum ds(sm, ScaleSequence::unchecked({Rational(1), Rational(2), Rational(5)}));
  const auto rep = verify_quasi_norm_axioms(ds, 1000);
  if (!rep.pass) {
    EXPECT_FALSE(rep.counterexample.empty());
  }
  SUCCEED() << (rep.pass ? "passes vacuously" : rep.axiom + " " + rep.counterexample);
}

TEST(DirectSum, LeftInvarianceAndInverseSymmetry) {
  const auto ds = TruncatedDirectSum::minimal(cyclic_summands({3, 4, 5}, 1));
  for (std::size_t h = 0; h < ds.size(); ++h) EXPECT_EQ(ds.norm(h), ds.norm(ds.inverse(h)));
  for (std::size_t h = 0; h < ds.size(); h += 7)
    for (std::size_t a = 0; a < ds.size(); ++a)
      for (std::size_t b = 0; b < ds.size(); b += 3)
        ASSERT_EQ(ds.distance(ds.multiply(h, a), ds.multiply(h, b)), ds.distance(a, b));
}

TEST(DirectSum, BallsBelowScaleAreLowerSubgroups) {
  const auto ds = TruncatedDirectSum::minimal(cyclic_summands({3, 5, 7}, 1));
  for (std::size_t i = 1; i <= 3; ++i) EXPECT_LE(ds.open_ball(ds.scales().at(i)).size(), ds.stride(i));
}

TEST(DirectSum, DiameterMatchesBruteForce) {
  const auto ds = TruncatedDirectSum::minimal(cyclic_summands({3, 4}, 2));
  const auto space = make_oracle_metric<Rational>(ds.size(), [&](std::size_t a, std::size_t b) {
    return ds.distance(a, b);
  });
  std::vector<std::size_t> pts;
  for (std::size_t p = 0; p < ds.size(); p += 5) {
    pts.push_back(p);
    EXPECT_EQ(ds.diameter(pts), set_diameter(space, pts));
  }
}

TEST(QuasiUltrametric, ExhaustiveOnTwoSummands) {
  const auto ds = TruncatedDirectSum::minimal(cyclic_summands({3, 5}, 2));
  const auto rep = quasi_ultrametric_check(ds);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.violations, 0u);
  // Classes have sizes 1, 8, 216 (k = 0, 1, 2); one pick each.
  EXPECT_EQ(rep.triples_checked, 1u * 8u * 216u);
}

TEST(QuasiUltrametric, SampledOnThreeSummands) {
  const auto ds = TruncatedDirectSum::minimal(cyclic_summands({3, 5, 7}, 1));
  EXPECT_TRUE(quasi_ultrametric_check_sampled(ds, 20000, 3).pass);
}

TEST(QuasiUltrametric, RepeatedTopsCanViolate) {
  // The lemma needs distinct k; equal k is outside it and may fail.
  const auto ds = TruncatedDirectSum::minimal(cyclic_summands({7}, 1));
  EXPECT_GT(ds.distance(0, 2), std::max(ds.distance(0, 1), ds.distance(1, 2)));
}

TEST(SpecFile, ReadsCyclicPowerAndScaleOverride) {
  std::istringstream in("summand cyclic_power 3 2\nsummand cyclic_power 5 2\nscale 2 4\n");
  const auto f = read_direct_sum_spec(in);
  ASSERT_EQ(f.summands.size(), 2u);
  EXPECT_EQ(f.scales().at(2), Rational(4));
  EXPECT_EQ(f.scales().at(3), Rational(17));  // 4 * diam(Z_5^2) + 1
  std::istringstream bad("summand\n");
  EXPECT_THROW(read_direct_sum_spec(bad), ParseError);
}

TEST(Pullback, WindowDispatchKeepsTiesLow) {
  const auto ds = TruncatedDirectSum::minimal(cyclic_summands({3, 5, 7}, 2));
  EXPECT_EQ(window_index(ds, Rational(1)), 0u);
  EXPECT_EQ(window_index(ds, Rational(3, 2)), 1u);
  EXPECT_EQ(window_index(ds, Rational(3)), 1u);
  EXPECT_EQ(window_index(ds, Rational(13)), 2u);
  EXPECT_EQ(window_index(ds, Rational(79)), 3u);
  EXPECT_THROW(window_index(ds, Rational(80)), InvalidScale);
  EXPECT_THROW(window_index(ds, Rational(0)), InvalidScale);
  EXPECT_TRUE(scale_window(ds, Rational(1)).whole);
  EXPECT_FALSE(scale_window(ds, Rational(2)).whole);
  EXPECT_TRUE(scale_window(ds, Rational(5, 2)).whole);  // (s_1 diam_1, s_2] = (2, 3]
}

TEST(Pullback, WholeClassGivesEntireTruncation) {
  const auto ds = TruncatedDirectSum::minimal(cyclic_summands({3, 5}, 1));
  const Cover u{{all_points(5)}};
  const auto v = pullback_cover(ds, Rational(4), u);
  ASSERT_EQ(v.classes.size(), 1u);
  EXPECT_EQ(v.classes[0].size(), ds.size());
}

TEST(Pullback, ComponentBoundMatchesOracle) {
  const auto ds = TruncatedDirectSum::minimal(cyclic_summands({3, 5}, 2));
  const auto dist = [&](std::size_t a, std::size_t b) { return ds.distance(a, b); };
  for (const Rational s : {Rational(1), Rational(3, 2), Rational(2), Rational(3), Rational(4), Rational(7),
                           Rational(10), Rational(13)}) {
    const auto w = scale_window(ds, s);
    const Cover u = w.whole ? Cover{{all_points(ds.summand(1).order())}}
                            : reflection_cover(2, w.index == 1 ? 3 : 5, w.summand_scale).cover;
    const Cover v = pullback_cover(ds, s, u);
    const auto got = pullback_component_bound(ds, v, s);
    EXPECT_EQ(got.diameter, oracle::component_bound(v.classes, s, dist)) << s.str();
    EXPECT_LE(got.diameter, Rational(28) * s) << s.str();
  }
}

TEST(Pullback, ReflectionPullbackOnZ5SquaredStaysBelowC2) {
  const auto ds = TruncatedDirectSum::minimal(cyclic_summands({5, 5}, 2));
  const Rational s2 = ds.scales().at(2);
  for (std::int64_t t = 1; t <= 8; ++t) {
    const Rational s = s2 + Rational(t, 2);
    if (s2 * ds.summand(2).diameter() < s) break;
    const auto w = scale_window(ds, s);
    const Cover v = pullback_cover(ds, s, reflection_cover(2, 5, w.summand_scale).cover);
    EXPECT_LE(pullback_component_bound(ds, v, s).diameter, Rational(28) * s);
  }
}

TEST(Pullback, FallsBackForUnsaturatedCovers) {
  const auto ds = TruncatedDirectSum::minimal(cyclic_summands({3, 3}, 1));
  const Cover c{{{0, 1, 2, 3}, {3, 4, 5, 6, 7, 8}}};
  const auto dist = [&](std::size_t a, std::size_t b) { return ds.distance(a, b); };
  for (const Rational s : {Rational(3, 2), Rational(2), Rational(3)})
    EXPECT_EQ(pullback_component_bound(ds, c, s).diameter, oracle::component_bound(c.classes, s, dist));
}
