#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "coarsedim/core/errors.hpp"
#include "coarsedim/core/rational.hpp"
#include "coarsedim/metric/components.hpp"

namespace coarsedim {

using LatticePoint = std::vector<std::int64_t>;

inline std::int64_t l1_distance(const LatticePoint& x, const LatticePoint& y) {
  std::int64_t d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d += x[i] > y[i] ? x[i] - y[i] : y[i] - x[i];
  return d;
}

// Exact l1 diameter: max over sign vectors sigma of
// (max sigma.x - min sigma.x).
inline std::int64_t l1_diameter(const std::vector<LatticePoint>& pts) {
  if (pts.size() < 2) return 0;
  const std::size_t n = pts.front().size();
  std::int64_t best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); mask += 2) {  // sigma_0 = +1 suffices
    std::int64_t lo = INT64_MAX, hi = INT64_MIN;
    for (const auto& p : pts) {
      std::int64_t v = 0;
      for (std::size_t i = 0; i < n; ++i) v += (mask >> i & 1) ? -p[i] : p[i];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    best = std::max(best, hi - lo);
  }
  return best;
}

// Shifted-cube cover of Z^n at scale s. With t = 2 for n = 1 and t = 1
// otherwise, period L = t(n+1)s and margin m = ts: x is in class j iff every
// coordinate satisfies (x_i - j*t*s) mod L in [0, L - m).
//   coverage: color j is missed by x_i exactly when x_i mod L lies in
//     [(j-1)ts, jts) mod L; these n+1 windows partition a period, so the n
//     coordinates miss at most n colors.
//   separation: distinct cubes of one color are more than m >= s apart.
//   diameter: a cube has side tns in each coordinate, so l1 diameter < t n^2 s.
class LatticeCoverSpec {
 public:
  LatticeCoverSpec(std::size_t n, Rational s) : n_(n), s_(s) {
    if (n == 0) throw InvalidArgument("lattice dimension must be at least 1");
    if (!s.is_positive()) throw InvalidArgument("scale must be positive, got " + s.str());
    t_ = n == 1 ? 2 : 1;
    period_ = Rational(static_cast<std::int64_t>(t_ * (n + 1))) * s_;
    margin_ = Rational(static_cast<std::int64_t>(t_)) * s_;
  }

  std::size_t n() const noexcept { return n_; }
  const Rational& scale() const noexcept { return s_; }
  std::size_t class_count() const noexcept { return n_ + 1; }
  const Rational& period() const noexcept { return period_; }
  const Rational& margin() const noexcept { return margin_; }

  // C_n' with components bounded by C_n' * s: 2(n+1) for n <= 2, n^2 above.
  static std::int64_t certified_ratio(std::size_t n) {
    const auto nn = static_cast<std::int64_t>(n);
    return n <= 2 ? 2 * (nn + 1) : nn * nn;
  }
  std::int64_t certified_ratio() const { return certified_ratio(n_); }

  bool in_class(std::size_t j, const LatticePoint& x) const {
    const Rational shift = Rational(static_cast<std::int64_t>(j)) * margin_;
    const Rational open_end = period_ - margin_;
    for (std::int64_t xi : x) {
      // (x_i - shift) mod L, as a rational in [0, L).
      const Rational v = Rational(xi) - shift;
      const Rational q(((v / period_).floor()));
      const Rational r = v - q * period_;
      if (!(r < open_end)) return false;
    }
    return true;
  }

  std::vector<std::size_t> classes_of(const LatticePoint& x) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j <= n_; ++j)
      if (in_class(j, x)) out.push_back(j);
    return out;
  }

 private:
  std::size_t n_;
  Rational s_;
  std::size_t t_ = 1;
  Rational period_, margin_;
};

// Axis-aligned box [lo_i, hi_i] in Z^n.
struct LatticeWindow {
  LatticePoint lo, hi;

  static LatticeWindow cube(std::size_t n, std::int64_t lo, std::int64_t hi) {
    return {LatticePoint(n, lo), LatticePoint(n, hi)};
  }

  std::size_t point_count() const {
    std::size_t c = 1;
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (hi[i] < lo[i]) return 0;
      c *= static_cast<std::size_t>(hi[i] - lo[i] + 1);
    }
    return c;
  }

  // Points in lexicographic order, last coordinate fastest.
  std::vector<LatticePoint> points() const {
    std::vector<LatticePoint> out;
    const std::size_t count = point_count();
    out.reserve(count);
    if (count == 0) return out;
    LatticePoint p = lo;
    while (true) {
      out.push_back(p);
      std::size_t i = p.size();
      while (i > 0) {
        --i;
        if (p[i] < hi[i]) {
          ++p[i];
          break;
        }
        p[i] = lo[i];
        if (i == 0) return out;
      }
      if (p.empty()) return out;
    }
  }
};

struct LatticeCover {
  LatticeCoverSpec spec;
  std::vector<LatticePoint> points;  // the window, index = point id
  Cover cover;
  std::int64_t max_component_diameter = 0;
  std::size_t component_count = 0;
};

namespace detail {

// Integer offsets v with ||v||_1 < s.
inline std::vector<LatticePoint> l1_open_ball(std::size_t n, const Rational& s) {
  const std::int64_t r = s.ceil() - 1;  // ||v||_1 <= r  <=>  ||v||_1 < s
  std::vector<LatticePoint> out;
  LatticePoint v(n, -r);
  while (true) {
    std::int64_t norm = 0;
    for (auto c : v) norm += c < 0 ? -c : c;
    if (norm <= r) out.push_back(v);
    std::size_t i = n;
    bool done = true;
    while (i > 0) {
      --i;
      if (v[i] < r) {
        ++v[i];
        done = false;
        break;
      }
      v[i] = -r;
    }
    if (done) break;
  }
  return out;
}

}  // namespace detail

// Builds the cover restricted to `window` and certifies it exhaustively:
// every point covered and every s-component of every class of l1 diameter
// at most C_n' * s. A failed certificate is an InternalError.
inline LatticeCover lattice_cover(std::size_t n, const Rational& s, const LatticeWindow& window,
                                  std::size_t budget = 100000) {
  LatticeCoverSpec spec(n, s);
  if (window.lo.size() != n || window.hi.size() != n) throw InvalidArgument("window dimension differs from n");
  const std::size_t count = window.point_count();
  if (count > budget)
    throw ResourceError("window has " + std::to_string(count) + " points, certification budget " +
                        std::to_string(budget));
  LatticeCover out{spec, window.points(), Cover{std::vector<std::vector<std::size_t>>(n + 1)}, 0, 0};
  for (std::size_t p = 0; p < out.points.size(); ++p) {
    const auto cls = spec.classes_of(out.points[p]);
    if (cls.empty()) throw InternalError("lattice cover misses point " + std::to_string(p));
    for (std::size_t j : cls) out.cover.classes[j].push_back(p);
  }

  // Point id lookup inside the window for neighbor enumeration.
  std::vector<std::size_t> extent(n);
  for (std::size_t i = 0; i < n; ++i) extent[i] = static_cast<std::size_t>(window.hi[i] - window.lo[i] + 1);
  auto id_of = [&](const LatticePoint& x) -> std::size_t {
    std::size_t id = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] < window.lo[i] || x[i] > window.hi[i]) return static_cast<std::size_t>(-1);
      id = id * extent[i] + static_cast<std::size_t>(x[i] - window.lo[i]);
    }
    return id;
  };
  const auto ball = detail::l1_open_ball(n, s);
  const auto space = make_oracle_metric<Rational>(out.points.size(), [&](std::size_t a, std::size_t b) {
    return Rational(l1_distance(out.points[a], out.points[b]));
  });
  const auto neighbors = [&](std::size_t p, auto&& visit) {
    LatticePoint q(n);
    for (const auto& v : ball) {
      for (std::size_t i = 0; i < n; ++i) q[i] = out.points[p][i] + v[i];
      const std::size_t id = id_of(q);
      if (id != static_cast<std::size_t>(-1)) visit(id);
    }
  };
  const auto diameter = [&](std::span<const std::size_t> part) {
    std::vector<LatticePoint> pts;
    pts.reserve(part.size());
    for (std::size_t p : part) pts.push_back(out.points[p]);
    return Rational(l1_diameter(pts));
  };
  const auto bound = component_diameter_bound_by_neighbors(space, out.cover, s, neighbors, diameter);
  out.max_component_diameter = bound.diameter.floor();
  out.component_count = bound.component_count;
  if (Rational(spec.certified_ratio()) * s < bound.diameter)
    throw InternalError("lattice cover component of diameter " + bound.diameter.str() + " exceeds " +
                        std::to_string(spec.certified_ratio()) + " * " + s.str());
  return out;
}

}  // namespace coarsedim
