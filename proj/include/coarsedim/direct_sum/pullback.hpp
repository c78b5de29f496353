#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "coarsedim/core/errors.hpp"
#include "coarsedim/core/rational.hpp"
#include "coarsedim/direct_sum/direct_sum.hpp"
#include "coarsedim/metric/components.hpp"

namespace coarsedim {

// Window i holds s in (s_i, s_{i+1}], with s_0 = 0. The last window of an
// m-summand truncation ends at s_{m+1}, or at s_m * diam(G_m) + 1 when only
// m scales are known.
struct ScaleWindow {
  std::size_t index = 0;
  bool whole = false;     // every class is the whole truncation
  Rational summand_scale;  // s / s_i, meaningful when !whole
};

inline Rational window_upper_end(const TruncatedDirectSum& ds) {
  const std::size_t m = ds.summand_count();
  if (ds.scales().size() > m) return ds.scales().at(m + 1);
  return ds.scales().at(m) * ds.summand(m).diameter() + Rational(1);
}

inline std::size_t window_index(const TruncatedDirectSum& ds, const Rational& s) {
  if (!s.is_positive()) throw InvalidScale("scale must be positive, got " + s.str());
  if (window_upper_end(ds) < s)
    throw InvalidScale("scale " + s.str() + " lies beyond the last window ending at " + window_upper_end(ds).str());
  const auto& v = ds.scales().values();
  const std::size_t m = ds.summand_count();
  // Count of s_i (i <= m) strictly below s; ties stay in the lower window.
  std::size_t lo = 0, hi = m;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (v[mid] < s) lo = mid + 1;
    else hi = mid;
  }
  return lo;
}

// Windows 0 and (s_i * diam(G_i), s_{i+1}] take whole classes; in between,
// the summand cover of G_i is used at scale s / s_i.
inline ScaleWindow scale_window(const TruncatedDirectSum& ds, const Rational& s) {
  ScaleWindow w;
  w.index = window_index(ds, s);
  if (w.index == 0) {
    w.whole = true;
    return w;
  }
  const Rational& si = ds.scales().at(w.index);
  w.whole = si * ds.summand(w.index).diameter() < s;
  w.summand_scale = s / si;
  return w;
}

// V_j = pi_i^{-1}(U_j). With a whole window every class is the truncation and
// the class count is kept.
inline Cover pullback_cover(const TruncatedDirectSum& ds, const Rational& s, const Cover& summand_cover) {
  const ScaleWindow w = scale_window(ds, s);
  Cover out;
  out.classes.resize(summand_cover.classes.size());
  if (w.whole) {
    std::vector<std::size_t> all(ds.size());
    for (std::size_t p = 0; p < all.size(); ++p) all[p] = p;
    for (auto& c : out.classes) c = all;
    return out;
  }
  const std::size_t q = ds.summand(w.index).order();
  validate_cover(summand_cover, q);
  std::vector<std::vector<char>> member(summand_cover.classes.size(), std::vector<char>(q, 0));
  for (std::size_t j = 0; j < summand_cover.classes.size(); ++j)
    for (std::size_t x : summand_cover.classes[j]) member[j][x] = 1;
  for (std::size_t p = 0; p < ds.size(); ++p) {
    const GroupElement x = ds.coord(p, w.index);
    for (std::size_t j = 0; j < member.size(); ++j)
      if (member[j][x]) out.classes[j].push_back(p);
  }
  return out;
}

// provider(i, scale) returns a cover of G_i certified at that scale.
template <class Provider>
Cover pullback_cover_with(const TruncatedDirectSum& ds, const Rational& s, std::size_t class_count,
                          Provider&& provider) {
  const ScaleWindow w = scale_window(ds, s);
  if (w.whole) return pullback_cover(ds, s, Cover{std::vector<std::vector<std::size_t>>(class_count)});
  return pullback_cover(ds, s, provider(w.index, w.summand_scale));
}

inline bool scales_satisfy_recurrence(const TruncatedDirectSum& ds) {
  if (ds.scales().at(1) < Rational(1)) return false;
  for (std::size_t i = 2; i <= ds.summand_count(); ++i)
    if (ds.scales().at(i) < ds.scales().at(i - 1) * ds.summand(i - 1).diameter() + Rational(1)) return false;
  return true;
}

inline bool classes_saturated_below(const TruncatedDirectSum& ds, const Cover& cover, std::size_t i) {
  if (i <= 1) return true;
  const std::size_t lower = ds.stride(i);
  for (const auto& cls : cover.classes) {
    std::vector<std::size_t> count(ds.size() / lower, 0);
    for (std::size_t p : cls) ++count.at(p / lower);
    for (std::size_t c : count)
      if (c != 0 && c != lower) return false;
  }
  return true;
}

// Exact max s-component diameter of any class. Candidate partners of p for
// s in window i are its lower-coordinate base (p with coordinates below i
// zeroed) and p with only coordinate i changed to some v at summand distance
// below s / s_i; every offered pair is rechecked against s. Together these
// span the same components as all pairs at distance < s whenever the scales
// satisfy the recurrence and every class is a union of cosets of the
// subgroup below i. Otherwise all of B(s) is offered.
inline ComponentBound pullback_component_bound(const TruncatedDirectSum& ds, const Cover& cover, const Rational& s) {
  const std::size_t i = window_index(ds, s);
  const auto diameter = [&](std::span<const std::size_t> part) { return ds.diameter(part); };
  if (!scales_satisfy_recurrence(ds) || !classes_saturated_below(ds, cover, i)) {
    const auto ball = ds.open_ball(s);
    const auto neighbors = [&](std::size_t p, auto&& visit) {
      for (std::size_t h : ball) visit(ds.multiply(p, h));
    };
    return component_diameter_bound_by_neighbors(ds, cover, s, neighbors, diameter);
  }
  if (i == 0) {
    const auto none = [](std::size_t, auto&&) {};
    return component_diameter_bound_by_neighbors(ds, cover, s, none, diameter);
  }
  const auto& g = ds.summand(i);
  const std::size_t q = g.order();
  const std::size_t lower = ds.stride(i);
  const Rational& si = ds.scales().at(i);
  // moves[a] = values v with s_i * d_{G_i}(a, v) < s.
  std::vector<std::vector<GroupElement>> moves(q);
  for (GroupElement a = 0; a < q; ++a)
    for (GroupElement v = 0; v < q; ++v)
      if (v != a && si * g.norm().at(g.group().mul(g.group().inv(a), v)) < s) moves[a].push_back(v);
  const auto neighbors = [&](std::size_t p, auto&& visit) {
    visit(p - p % lower);
    for (GroupElement v : moves[ds.coord(p, i)]) visit(ds.with_coord(p, i, v));
  };
  return component_diameter_bound_by_neighbors(ds, cover, s, neighbors, diameter);
}

}  // namespace coarsedim
