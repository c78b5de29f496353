#include <gtest/gtest.h>

#include <cmath>

#include "coarsedim/metric/control.hpp"

using namespace coarsedim;

namespace {

std::vector<Rational> grid(int count, int num, int den) {
  std::vector<Rational> g;
  for (int i = 0; i < count; ++i) g.emplace_back(static_cast<std::int64_t>(i) * num, den);
  return g;
}

}  // namespace

TEST(ControlFunction, SerializationRoundTrip) {
  const char* forms[] = {
      "linear C=3/1 k=0/1",
      "poly c=0/1,0/1,1/1",
      "logaffine base=10/1 C=1/1 b=0/1",
      "tab 0/1:1/1,1/1:2/1,4/1:7/2",
      "logaffine base=10/1 C=1/1 b=0/1 | linear C=2/1 k=1/1 | expaffine base=10/1 C=1/1 b=0/1 | clamp0",
  };
  for (const char* f : forms) EXPECT_EQ(ControlFunction::parse(f).str(), f);
  EXPECT_EQ(ControlFunction::parse("identity").str(), "linear C=1/1 k=0/1");
}

TEST(ControlFunction, RejectsNonMonotoneForms) {
  EXPECT_THROW(ControlFunction::linear(Rational(0)), InvalidArgument);
  EXPECT_THROW(ControlFunction::polynomial({Rational(0), Rational(-1)}), InvalidArgument);
  EXPECT_THROW(ControlFunction::log_affine(Rational(1)), InvalidArgument);
  EXPECT_THROW(ControlFunction::tabulated({{Rational(0), Rational(2)}, {Rational(1), Rational(1)}}),
               InvalidArgument);
  EXPECT_THROW(ControlFunction::parse("spline x=1"), InvalidArgument);
  EXPECT_THROW(ControlFunction::parse("linear C=1/1"), InvalidArgument);
}

TEST(ControlFunction, TabulatedIsRightConstant) {
  const auto f = ControlFunction::tabulated({{Rational(1), Rational(2)}, {Rational(3), Rational(5)}});
  EXPECT_EQ(*f.exact(Rational(0)), Rational(2));
  EXPECT_EQ(*f.exact(Rational(1)), Rational(2));
  EXPECT_EQ(*f.exact(Rational(3, 2)), Rational(5));
  EXPECT_EQ(*f.exact(Rational(3)), Rational(5));
  EXPECT_THROW(f.exact(Rational(4)), OutOfRange);
  EXPECT_THROW(f(4.0L), OutOfRange);
}

TEST(ControlFunction, Divergence) {
  EXPECT_TRUE(ControlFunction::linear(Rational(2)).is_increasing_divergent());
  EXPECT_TRUE(ControlFunction::polynomial({Rational(0), Rational(0), Rational(1)}).is_increasing_divergent());
  EXPECT_FALSE(ControlFunction::polynomial({Rational(0)}).is_increasing_divergent());
  EXPECT_EQ(ControlFunction::tabulated({{Rational(0), Rational(1)}}).divergence(),
            control::Divergence::kUnverifiable);
}

TEST(GeneralizedInverse, BelowRangeIsZero) {
  const auto rho = ControlFunction::linear(Rational(2), Rational(3));
  const auto inv = rho.upper_inverse();
  EXPECT_EQ(*inv.exact(Rational(1)), Rational(0));
  EXPECT_EQ(*inv.exact(Rational(7)), Rational(2));
}

TEST(GeneralizedInverse, SandwichOnClosedForms) {
  const ControlFunction forms[] = {
      ControlFunction::linear(Rational(1, 2)),
      ControlFunction::linear(Rational(3), Rational(1)),
      ControlFunction::log_affine(Rational(10)),
      ControlFunction::log_affine(Rational(2), Rational(3), Rational(1)),
      ControlFunction::polynomial({Rational(1), Rational(2), Rational(1)}),
  };
  for (const auto& rho : forms) {
    const auto inv = rho.upper_inverse();
    for (const auto& x : grid(50, 7, 3)) {
      const long double xv = x.to_long_double();
      const long double back = inv(rho(xv));
      EXPECT_NEAR(static_cast<double>(back), static_cast<double>(xv), 1e-9 * (1 + xv)) << rho.str();
      const long double t = xv;
      if (t < rho(0.0L)) {
        EXPECT_EQ(inv(t), 0.0L);
        continue;
      }
      EXPECT_LE(rho(inv(t)), t * (1 + 1e-15L) + 1e-15L) << rho.str();
    }
  }
}

TEST(GeneralizedInverse, TabulatedSupOfSublevelSet) {
  const auto f = ControlFunction::tabulated(
      {{Rational(1), Rational(2)}, {Rational(3), Rational(5)}, {Rational(6), Rational(9)}});
  const auto inv = f.upper_inverse();
  EXPECT_EQ(*inv.exact(Rational(1)), Rational(0));
  EXPECT_EQ(*inv.exact(Rational(2)), Rational(1));
  EXPECT_EQ(*inv.exact(Rational(6)), Rational(3));
  EXPECT_THROW(inv.exact(Rational(9)), OutOfRange);
}

TEST(Transport, IdentityProfileIsIdentity) {
  const CoarseEmbeddingProfile id{ControlFunction::identity(), ControlFunction::identity()};
  const ControlFunction dys[] = {ControlFunction::linear(Rational(3), Rational(2)),
                                 ControlFunction::polynomial({Rational(1), Rational(0), Rational(2)})};
  for (const auto& dy : dys) {
    const auto dx = transport_control(dy, id);
    for (const auto& s : grid(40, 5, 2)) {
      ASSERT_TRUE(dx.exact(s).has_value());
      EXPECT_EQ(*dx.exact(s), *dy.exact(s));
    }
  }
}

TEST(Transport, LinearProfileComposesExactly) {
  const CoarseEmbeddingProfile p{ControlFunction::linear(Rational(2)), ControlFunction::linear(Rational(1, 2))};
  const auto dx = transport_control(ControlFunction::linear(Rational(3)), p);
  EXPECT_EQ(dx.str(), "linear C=12/1 k=0/1 | clamp0");
  for (const auto& s : grid(30, 3, 4)) EXPECT_EQ(*dx.exact(s), Rational(12) * s);
}

TEST(Transport, LogProfileGivesPolynomialFormula) {
  const auto rho = ControlFunction::log_affine(Rational(10));
  const CoarseEmbeddingProfile p{rho, rho};
  const Rational C(5, 2), b(3, 4);
  const auto dx = transport_control(ControlFunction::linear(C, b), p);
  EXPECT_TRUE(dx.is_closed_form());
  for (const auto& s : grid(100, 37, 10)) {
    const long double sv = s.to_long_double();
    const long double expected =
        std::pow(10.0L, b.to_long_double()) * std::pow(1.0L + sv, C.to_long_double()) - 1.0L;
    EXPECT_LT(std::fabs(dx(sv) - expected) / expected, std::ldexp(1.0L, -40)) << sv;
  }
}

TEST(Transport, TabulatedNeedsGrid) {
  std::vector<std::pair<Rational, Rational>> samples;
  for (std::int64_t x = 0; x <= 200; x += 10) samples.emplace_back(Rational(x), Rational(x, 2));
  const CoarseEmbeddingProfile p{ControlFunction::identity(), ControlFunction::tabulated(samples)};
  EXPECT_THROW(transport_control(ControlFunction::identity(), p), InvalidArgument);
  const auto dx = transport_control(ControlFunction::identity(), p, {Rational(0), Rational(10), Rational(20)});
  EXPECT_FALSE(dx.is_closed_form());
  // rho_minus <= 10 exactly on [0, 20].
  EXPECT_EQ(*dx.exact(Rational(10)), Rational(20));
  EXPECT_THROW(dx.exact(Rational(21)), OutOfRange);
}

TEST(Profile, CheckFlagsOrderAndDivergence) {
  const std::vector<Rational> pts = grid(10, 1, 1);
  EXPECT_TRUE(check_profile({ControlFunction::linear(Rational(2)), ControlFunction::linear(Rational(1))}, pts).ok);
  EXPECT_FALSE(check_profile({ControlFunction::linear(Rational(1)), ControlFunction::linear(Rational(2))}, pts).ok);
  EXPECT_FALSE(
      check_profile({ControlFunction::linear(Rational(1)), ControlFunction::polynomial({Rational(0)})}, pts).ok);
}

TEST(VerifyControl, SingletonSpaceAlwaysPasses) {
  const auto space = integer_interval(0, 0);
  const auto rows = verify_control_function(
      space, ControlFunction::linear(Rational(1, 100)), 0, [](const Rational&) { return Cover{{{0}}}; },
      {Rational(1), Rational(5)});
  for (const auto& r : rows) EXPECT_TRUE(r.pass);
}

TEST(VerifyControl, WholeSpaceCoverFailsForSmallControl) {
  // Ties do not join, so at s = 1 the unit-spaced interval is still discrete;
  // the whole-space component appears for any s > 1.
  const auto space = integer_interval(0, 99);
  std::vector<std::size_t> all(100);
  for (std::size_t i = 0; i < 100; ++i) all[i] = i;
  const auto rows = verify_control_function(
      space, ControlFunction::linear(Rational(1, 4)), 0, [&](const Rational&) { return Cover{{all}}; },
      {Rational(1), Rational(2)});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].pass);
  EXPECT_EQ(rows[0].measured, Rational(0));
  EXPECT_FALSE(rows[1].pass);
  EXPECT_EQ(rows[1].measured, Rational(99));
}

TEST(VerifyControl, TooManyClassesRejected) {
  const auto space = integer_interval(0, 2);
  EXPECT_THROW(verify_control_function(
                   space, ControlFunction::identity(), 0,
                   [](const Rational&) { return Cover{{{0}, {1, 2}}}; }, {Rational(1)}),
               InvalidArgument);
}
