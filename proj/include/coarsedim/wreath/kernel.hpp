#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "coarsedim/core/errors.hpp"
#include "coarsedim/core/rational.hpp"
#include "coarsedim/wreath/free_group.hpp"
#include "coarsedim/wreath/lamplighter.hpp"

namespace coarsedim {

// s-component of the identity inside K cap B(R), K the kernel of H wr F_2 ->
// F_2 with the induced word metric. Its diameter is a lower bound for any
// 0-dimensional control function of K at s. boundary_touched: some member x
// has ||x|| + ceil(s) - 1 > R, so partners outside the ball may be missing.
struct KernelControl {
  Rational scale;
  std::int64_t radius = 0;  // enumerated radius actually used
  std::size_t component_size = 0;
  std::int64_t component_diameter = 0;
  bool boundary_touched = false;
  bool partial = false;  // enumeration stopped at the element budget
};

inline KernelControl kernel_zero_dim_control(const Lamplighter& L, const Rational& s, std::int64_t R,
                                             std::size_t budget = 5000000) {
  if (!s.is_positive()) throw InvalidArgument("scale must be positive, got " + s.str());
  if (R < 0) throw InvalidArgument("radius must be nonnegative");
  const LamplighterBall ball = lamplighter_ball(L, R, budget);
  KernelControl out;
  out.scale = s;
  out.radius = ball.radius;
  out.partial = !ball.complete;

  // Steps h in K with ||h|| < s; x and x h are at distance ||h||.
  const std::int64_t reach = s.ceil() - 1;
  std::vector<const LamplighterElement*> steps;
  for (std::size_t i = 1; i < ball.elements.size(); ++i)
    if (ball.depth[i] <= reach && ball.elements[i].in_kernel()) steps.push_back(&ball.elements[i]);
  if (reach > ball.radius) out.partial = true;

  std::vector<char> seen(ball.elements.size(), 0);
  std::vector<std::size_t> comp{0};
  seen[0] = 1;
  for (std::size_t q = 0; q < comp.size(); ++q) {
    const auto& x = ball.elements[comp[q]];
    for (const auto* h : steps) {
      const auto it = ball.index.find(L.multiply(x, *h).key());
      if (it == ball.index.end() || seen[it->second]) continue;
      seen[it->second] = 1;
      comp.push_back(it->second);
    }
  }
  out.component_size = comp.size();
  for (std::size_t p : comp)
    if (ball.depth[p] + reach > ball.radius) out.boundary_touched = true;
  std::vector<LamplighterElement> inv;
  inv.reserve(comp.size());
  for (std::size_t p : comp) inv.push_back(L.inverse(ball.elements[p]));
  for (std::size_t a = 0; a < comp.size(); ++a)
    for (std::size_t b = a + 1; b < comp.size(); ++b) {
      const std::int64_t d = L.word_length(L.multiply(inv[a], ball.elements[comp[b]]));
      if (d > out.component_diameter) out.component_diameter = d;
    }
  return out;
}

// floor(gamma(r) / n) <= D_K^{n-1}(3 n r), here for n = 1 only. A value
// computed on a truncated ball is a lower bound, so a shortfall there is
// inconclusive rather than a failure.
struct GrowthControlRow {
  std::int64_t r = 0;
  std::uint64_t gamma = 0;
  Rational scale;
  KernelControl control;
  std::string verdict;  // "pass", "fail" or "inconclusive"
};

inline GrowthControlRow growth_control_check(const Lamplighter& L, std::int64_t r, std::int64_t R,
                                             std::size_t budget = 5000000) {
  GrowthControlRow row;
  row.r = r;
  row.gamma = growth_function(static_cast<std::size_t>(r));
  row.scale = Rational(3 * r);
  row.control = kernel_zero_dim_control(L, row.scale, R, budget);
  const bool truncated = row.control.boundary_touched || row.control.partial;
  if (static_cast<std::uint64_t>(row.control.component_diameter) >= row.gamma) row.verdict = "pass";
  else row.verdict = truncated ? "inconclusive" : "fail";
  return row;
}

inline void write_kernel_csv(std::ostream& out, const std::vector<KernelControl>& rows) {
  out << "s,component_size,component_diameter,boundary_touched\n";
  for (const auto& k : rows)
    out << k.scale.str() << ',' << k.component_size << ',' << k.component_diameter << ','
        << (k.boundary_touched ? "true" : "false") << '\n';
}

}  // namespace coarsedim
