#include <gtest/gtest.h>

#include <random>

#include "coarsedim/wreath/free_group.hpp"
#include "coarsedim/wreath/kernel.hpp"
#include "coarsedim/wreath/lamplighter.hpp"

using namespace coarsedim;

namespace {

LamplighterElement lamp_at(const std::string& pos, const std::string& cursor = "") {
  LamplighterElement x;
  x.lamps[FreeGroupElement(pos)] = 1;
  x.cursor = FreeGroupElement(cursor);
  return x;
}

}  // namespace

TEST(FreeGroup, ReductionAndInverse) {
  EXPECT_EQ(FreeGroupElement("aAb").word(), "b");
  EXPECT_EQ(FreeGroupElement("abBA").word(), "");
  const FreeGroupElement g("abA");
  EXPECT_EQ((g * g.inverse()).word(), "");
  EXPECT_EQ(g.inverse().word(), "aBA");
  EXPECT_THROW(FreeGroupElement("ax"), InvalidArgument);
}

TEST(FreeGroup, GrowthMatchesClosedForm) {
  std::uint64_t pow3 = 1;
  for (std::size_t r = 0; r <= 7; ++r, pow3 *= 3) EXPECT_EQ(growth_function(r), 2 * pow3 - 1) << r;
  EXPECT_EQ(growth_function(1), 5u);
  EXPECT_EQ(growth_function(2), 17u);
  EXPECT_THROW(growth_function(5, 100), ResourceError);
}

TEST(Lamplighter, SpecExamples) {
  const Lamplighter L;
  EXPECT_EQ(L.word_length(lamp_at("")), 1);
  EXPECT_EQ(L.word_length(lamp_at("a")), 3);
  LamplighterElement g;
  g.cursor = FreeGroupElement("abAb");
  EXPECT_EQ(L.word_length(g), 4);
  EXPECT_EQ(L.word_length(lamp_at("ab", "B")), 2 * 3 - 1 + 1);
}

TEST(Lamplighter, GroupLaws) {
  const Lamplighter L;
  const auto ball = lamplighter_ball(L, 3);
  for (std::size_t i = 0; i < ball.elements.size(); i += 3) {
    const auto& x = ball.elements[i];
    EXPECT_EQ(L.multiply(x, L.inverse(x)), LamplighterElement{});
    EXPECT_EQ(L.multiply(L.inverse(x), x), LamplighterElement{});
    for (std::size_t j = 0; j < ball.elements.size(); j += 17)
      for (std::size_t k = 0; k < ball.elements.size(); k += 29) {
        const auto& y = ball.elements[j];
        const auto& z = ball.elements[k];
        ASSERT_EQ(L.multiply(L.multiply(x, y), z), L.multiply(x, L.multiply(y, z)));
      }
  }
}

TEST(Lamplighter, SteinerFormulaMatchesBfsOnRadiusFive) {
  const Lamplighter L;
  const auto ball = lamplighter_ball(L, 5);
  for (std::size_t i = 0; i < ball.elements.size(); ++i)
    ASSERT_EQ(L.word_length(ball.elements[i]), ball.depth[i]) << ball.elements[i].key();
}

TEST(Lamplighter, BallSizes) {
  const Lamplighter L;
  EXPECT_EQ(lamplighter_ball(L, 0).elements.size(), 1u);
  EXPECT_EQ(lamplighter_ball(L, 1).elements.size(), 6u);
  const auto limited = lamplighter_ball(L, 6, 100);
  EXPECT_FALSE(limited.complete);
  EXPECT_LE(limited.elements.size(), 100u);
}

TEST(Lamplighter, NormSymmetryAndSubadditivitySampled) {
  const Lamplighter L;
  const auto ball = lamplighter_ball(L, 5);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, ball.elements.size() - 1);
  for (int t = 0; t < 10000; ++t) {
    const auto& x = ball.elements[pick(rng)];
    const auto& y = ball.elements[pick(rng)];
    EXPECT_EQ(L.word_length(x), L.word_length(L.inverse(x)));
    EXPECT_LE(L.word_length(L.multiply(x, y)), L.word_length(x) + L.word_length(y));
  }
}

TEST(Lamplighter, FastPairDistancesMatchDefinition) {
  const Lamplighter L;
  const auto ball = lamplighter_ball(L, 3);
  std::size_t calls = 0;
  for_each_ball_distance(L, ball, [&](std::size_t i, std::size_t j, std::int64_t d) {
    ++calls;
    ASSERT_EQ(d, L.distance(ball.elements[i], ball.elements[j])) << i << " " << j;
  });
  EXPECT_EQ(calls, ball.elements.size() * (ball.elements.size() - 1) / 2);
}

TEST(Lamplighter, LargerLampGroup) {
  const Lamplighter L(FiniteGroupTable::cyclic(3), {1});
  const auto ball = lamplighter_ball(L, 4);
  for (std::size_t i = 0; i < ball.elements.size(); ++i)
    ASSERT_EQ(L.word_length(ball.elements[i]), ball.depth[i]);
  for_each_ball_distance(L, ball, [&](std::size_t i, std::size_t j, std::int64_t d) {
    if ((i + j) % 13 == 0) {
      ASSERT_EQ(d, L.distance(ball.elements[i], ball.elements[j]));
    }
  });
}

TEST(KernelControl, SmallScaleGivesIdentityOnly) {
  const Lamplighter L;
  const auto k = kernel_zero_dim_control(L, Rational(1), 4);
  EXPECT_EQ(k.component_size, 1u);
  EXPECT_EQ(k.component_diameter, 0);
  EXPECT_FALSE(k.boundary_touched);
}

TEST(KernelControl, ScaleTwoJoinsTheOriginLamp) {
  const Lamplighter L;
  const auto k = kernel_zero_dim_control(L, Rational(2), 8);
  EXPECT_EQ(k.component_size, 2u);
  EXPECT_EQ(k.component_diameter, 1);
  EXPECT_FALSE(k.boundary_touched);
}

TEST(KernelControl, MonotoneInScaleAndRadius) {
  const Lamplighter L;
  std::int64_t prev = 0;
  for (std::int64_t s = 1; s <= 5; ++s) {
    const auto k = kernel_zero_dim_control(L, Rational(s), 7);
    EXPECT_GE(k.component_diameter, prev);
    prev = k.component_diameter;
  }
  EXPECT_LE(kernel_zero_dim_control(L, Rational(4), 5).component_diameter,
            kernel_zero_dim_control(L, Rational(4), 7).component_diameter);
}

TEST(KernelControl, GrowthRowAtRadiusOne) {
  const Lamplighter L;
  const auto row = growth_control_check(L, 1, 6);
  EXPECT_EQ(row.gamma, 5u);
  EXPECT_EQ(row.scale, Rational(3));
  // ||h|| < 3 in K leaves only the origin lamp: the component is {e, t}.
  EXPECT_EQ(row.control.component_diameter, 1);
  EXPECT_FALSE(row.control.boundary_touched);
  EXPECT_EQ(row.verdict, "fail");
}
