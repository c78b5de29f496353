#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "coarsedim/core/errors.hpp"
#include "coarsedim/core/parallel.hpp"
#include "coarsedim/core/rational.hpp"
#include "coarsedim/core/union_find.hpp"
#include "coarsedim/metric/space.hpp"

namespace coarsedim {

// A finite sequence of points whose consecutive distances are strictly below
// the scale.
struct ScaleChain {
  Rational scale;
  std::vector<std::size_t> points;
};

template <ExactMetricSpace S>
bool is_scale_chain(const S& space, const ScaleChain& chain) {
  if (!chain.scale.is_positive()) return false;
  for (std::size_t i = 0; i + 1 < chain.points.size(); ++i)
    if (!(Rational(space.distance(chain.points[i], chain.points[i + 1])) < chain.scale)) return false;
  return true;
}

// n+1 classes of point indices; dimension() is n.
struct Cover {
  std::vector<std::vector<std::size_t>> classes;

  std::size_t dimension() const noexcept { return classes.empty() ? 0 : classes.size() - 1; }
};

// Throws InvalidCover naming the first uncovered point.
inline void validate_cover(const Cover& cover, std::size_t point_count) {
  if (cover.classes.empty()) throw InvalidArgument("cover has no classes");
  std::vector<bool> covered(point_count, false);
  for (const auto& cls : cover.classes)
    for (std::size_t p : cls) {
      if (p >= point_count)
        throw InvalidArgument("cover references point " + std::to_string(p) + " outside the space");
      covered[p] = true;
    }
  for (std::size_t p = 0; p < point_count; ++p)
    if (!covered[p]) throw InvalidCover(p);
}

using Partition = std::vector<std::vector<std::size_t>>;

namespace detail {

inline std::vector<std::size_t> normalized_subset(std::span<const std::size_t> subset,
                                                  std::size_t point_count) {
  std::vector<std::size_t> pts(subset.begin(), subset.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (!pts.empty() && pts.back() >= point_count)
    throw InvalidArgument("subset references point " + std::to_string(pts.back()) +
                          " outside the space");
  return pts;
}

// Parts ordered by their smallest member, members ascending.
inline Partition collect_parts(const std::vector<std::size_t>& pts, UnionFind& uf) {
  std::vector<std::size_t> root_to_part(pts.size(), static_cast<std::size_t>(-1));
  Partition parts;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::size_t r = uf.find(i);
    if (root_to_part[r] == static_cast<std::size_t>(-1)) {
      root_to_part[r] = parts.size();
      parts.emplace_back();
    }
    parts[root_to_part[r]].push_back(pts[i]);
  }
  return parts;
}

inline void require_positive_scale(const Rational& scale) {
  if (!scale.is_positive()) throw InvalidArgument("scale must be positive, got " + scale.str());
}

}  // namespace detail

// s-scale connected components of `subset`: union-find over every pair at
// distance strictly below `scale`. Ties at distance == scale do not join.
template <ExactMetricSpace S>
Partition scale_components(const S& space, std::span<const std::size_t> subset,
                           const Rational& scale) {
  detail::require_positive_scale(scale);
  const auto pts = detail::normalized_subset(subset, space.size());
  UnionFind uf(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (Rational(space.distance(pts[i], pts[j])) < scale) uf.unite(i, j);
  return detail::collect_parts(pts, uf);
}

template <ExactMetricSpace S>
Partition scale_components(const S& space, const Rational& scale) {
  std::vector<std::size_t> all(space.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return scale_components(space, all, scale);
}

// Same partition, but candidate partners of p come from
// neighbors(p, visit): it must call visit(q) for at least every q with
// d(p, q) < scale (supersets are fine; distances are rechecked). Used where
// the space has structure (a group ball, a lattice) that avoids all-pairs.
template <ExactMetricSpace S, class Neighbors>
Partition scale_components_by_neighbors(const S& space, std::span<const std::size_t> subset,
                                        const Rational& scale, Neighbors&& neighbors) {
  detail::require_positive_scale(scale);
  const auto pts = detail::normalized_subset(subset, space.size());
  std::vector<std::size_t> slot(space.size(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < pts.size(); ++i) slot[pts[i]] = i;
  UnionFind uf(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::size_t p = pts[i];
    neighbors(p, [&](std::size_t q) {
      if (q >= slot.size()) return;
      const std::size_t j = slot[q];
      if (j == static_cast<std::size_t>(-1) || j == i) return;
      if (Rational(space.distance(p, q)) < scale) uf.unite(i, j);
    });
  }
  return detail::collect_parts(pts, uf);
}

// Exact diameter of a point set (0 for fewer than two points).
template <ExactMetricSpace S>
Rational set_diameter(const S& space, std::span<const std::size_t> pts) {
  const std::size_t m = pts.size();
  if (m < 2) return Rational(0);
  const std::size_t workers = m > 2048 ? worker_count() : 1;
  std::vector<Rational> best(workers, Rational(0));
  parallel_chunks(m, workers, [&](std::size_t w, std::size_t begin, std::size_t end) {
    Rational local(0);
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        const Rational d = space.distance(pts[i], pts[j]);
        if (local < d) local = d;
      }
    best[w] = local;
  });
  return *std::max_element(best.begin(), best.end());
}

struct ComponentBound {
  Rational diameter;                   // max over classes and components
  std::size_t class_index = 0;         // where the maximum is attained
  std::vector<std::size_t> component;  // the attaining component
  std::size_t component_count = 0;     // total components over all classes
};

// Maximum diameter over all s-scale components of all cover classes. This is
// the least value any control function must take at this scale for this
// cover.
template <ExactMetricSpace S>
ComponentBound component_diameter_bound(const S& space, const Cover& cover, const Rational& scale) {
  validate_cover(cover, space.size());
  ComponentBound out;
  bool first = true;
  for (std::size_t c = 0; c < cover.classes.size(); ++c) {
    const auto parts = scale_components(space, cover.classes[c], scale);
    out.component_count += parts.size();
    for (const auto& part : parts) {
      const Rational d = set_diameter(space, part);
      if (first || out.diameter < d) {
        out.diameter = d;
        out.class_index = c;
        out.component = part;
        first = false;
      }
    }
  }
  return out;
}

// Variant with a neighbor enumerator (see scale_components_by_neighbors) and
// an optional custom diameter routine diam(span) -> Rational.
template <ExactMetricSpace S, class Neighbors, class Diameter>
ComponentBound component_diameter_bound_by_neighbors(const S& space, const Cover& cover,
                                                     const Rational& scale, Neighbors&& neighbors,
                                                     Diameter&& diameter) {
  validate_cover(cover, space.size());
  ComponentBound out;
  bool first = true;
  for (std::size_t c = 0; c < cover.classes.size(); ++c) {
    const auto parts = scale_components_by_neighbors(space, cover.classes[c], scale, neighbors);
    out.component_count += parts.size();
    for (const auto& part : parts) {
      const Rational d = diameter(std::span<const std::size_t>(part));
      if (first || out.diameter < d) {
        out.diameter = d;
        out.class_index = c;
        out.component = part;
        first = false;
      }
    }
  }
  return out;
}

}  // namespace coarsedim
