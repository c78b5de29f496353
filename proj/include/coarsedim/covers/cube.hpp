#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coarsedim/core/errors.hpp"
#include "coarsedim/core/rational.hpp"
#include "coarsedim/covers/lattice.hpp"
#include "coarsedim/direct_sum/direct_sum.hpp"
#include "coarsedim/group/table.hpp"
#include "coarsedim/metric/space.hpp"

namespace coarsedim {

// Grid {0..side}^n, ids mixed radix base side+1 with coordinate 0 most
// significant; image[g] is f of grid point g.
template <class Point>
struct DilatedCube {
  std::size_t n = 0;
  std::size_t side = 0;
  Rational C;
  std::vector<Point> image;

  std::size_t grid_size() const {
    std::size_t c = 1;
    for (std::size_t i = 0; i < n; ++i) c *= side + 1;
    return c;
  }
};

inline std::vector<std::size_t> grid_coords(std::size_t n, std::size_t side, std::size_t g) {
  std::vector<std::size_t> out;
  FiniteGroupTable::decode(std::vector<std::size_t>(n, side + 1), g, out);
  return out;
}

inline std::int64_t grid_l1(std::size_t n, std::size_t side, std::size_t a, std::size_t b) {
  std::int64_t d = 0;
  for (std::size_t i = 0; i < n; ++i, a /= side + 1, b /= side + 1) {
    const auto x = static_cast<std::int64_t>(a % (side + 1)), y = static_cast<std::int64_t>(b % (side + 1));
    d += x > y ? x - y : y - x;
  }
  return d;
}

struct CubeCheck {
  bool pass = true;
  std::uint64_t pairs_checked = 0;
  std::string first_violation;
};

// Exact: C * ||x - y||_1 == dist(f(x), f(y)) for every grid pair.
template <class Point, class Dist>
CubeCheck verify_dilated_cube(const DilatedCube<Point>& cube, Dist&& dist) {
  CubeCheck out;
  const std::size_t m = cube.grid_size();
  if (cube.image.size() != m) throw InvalidArgument("cube image size differs from its grid");
  if (!cube.C.is_positive()) {
    out.pass = false;
    out.first_violation = "dilation constant " + cube.C.str() + " is not positive";
    return out;
  }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      ++out.pairs_checked;
      const Rational want = cube.C * Rational(grid_l1(cube.n, cube.side, a, b));
      const Rational got = Rational(dist(cube.image[a], cube.image[b]));
      if (got != want) {
        out.pass = false;
        out.first_violation = "grid " + std::to_string(a) + "," + std::to_string(b) + ": expected " + want.str() +
                              ", got " + got.str();
        return out;
      }
    }
  return out;
}

// f(x) = step * x in Z^n with the l1 metric.
inline DilatedCube<LatticePoint> lattice_cube(std::size_t n, std::size_t side, std::int64_t step) {
  DilatedCube<LatticePoint> cube{n, side, Rational(step), {}};
  for (std::size_t g = 0; g < cube.grid_size(); ++g) {
    LatticePoint p(n);
    const auto c = grid_coords(n, side, g);
    for (std::size_t i = 0; i < n; ++i) p[i] = step * static_cast<std::int64_t>(c[i]);
    cube.image.push_back(std::move(p));
  }
  return cube;
}

// Summand i of ds is Z_k^dim (ids as FiniteGroupTable::cyclic_power). The
// m-cube of side r = floor(k/2) sits in the first m coordinates of that
// summand with every other summand at the identity; C = s_i.
inline std::optional<DilatedCube<std::size_t>> direct_sum_cube(const TruncatedDirectSum& ds, std::size_t i,
                                                              std::size_t k, std::size_t dim, std::size_t m,
                                                              std::size_t side) {
  if (i == 0 || i > ds.summand_count() || m == 0 || m > dim) return std::nullopt;
  std::size_t order = 1;
  for (std::size_t j = 0; j < dim; ++j) order *= k;
  if (order != ds.summand(i).order()) throw InvalidArgument("summand order differs from k^dim");
  if (side > k / 2) return std::nullopt;
  DilatedCube<std::size_t> cube{m, side, ds.scales().at(i), {}};
  const std::vector<std::size_t> moduli(dim, k);
  for (std::size_t g = 0; g < cube.grid_size(); ++g) {
    auto c = grid_coords(m, side, g);
    c.resize(dim, 0);
    cube.image.push_back(FiniteGroupTable::encode(moduli, c) * ds.stride(i));
  }
  return cube;
}

// Generic search for a 1-cube of side k: rules out spaces with at most k
// points, then backtracks over f(0), f(1) (fixing C) and extensions, within
// a budget of visited partial maps. Higher dimensions are not searched.
template <ExactMetricSpace S>
std::optional<DilatedCube<std::size_t>> find_dilated_cube(const S& space, std::size_t n, std::size_t k,
                                                          std::uint64_t budget = 1000000) {
  if (k == 0 || n == 0) {
    if (space.size() == 0) return std::nullopt;
    return DilatedCube<std::size_t>{n, k, Rational(1), {0}};  // single grid point
  }
  std::size_t need = 1;
  for (std::size_t i = 0; i < n; ++i) {
    need *= k + 1;
    if (need > space.size()) return std::nullopt;  // a dilated cube is injective
  }
  if (n != 1) return std::nullopt;
  std::uint64_t visited = 0;
  std::vector<std::size_t> f;
  std::function<bool(const Rational&)> extend = [&](const Rational& C) -> bool {
    if (f.size() == k + 1) return true;
    if (++visited > budget) throw ResourceError("dilated cube search exceeded budget");
    const std::size_t x = f.size();
    for (std::size_t p = 0; p < space.size(); ++p) {
      bool ok = true;
      for (std::size_t y = 0; y < x && ok; ++y)
        ok = Rational(space.distance(f[y], p)) == C * Rational(static_cast<std::int64_t>(x - y));
      if (!ok) continue;
      f.push_back(p);
      if (extend(C)) return true;
      f.pop_back();
    }
    return false;
  };
  for (std::size_t a = 0; a < space.size(); ++a)
    for (std::size_t b = 0; b < space.size(); ++b) {
      if (a == b) continue;
      const Rational C(space.distance(a, b));
      f = {a, b};
      if (extend(C)) return DilatedCube<std::size_t>{1, k, C, f};
    }
  return std::nullopt;
}

// Point of Z^a (+) G with the l1-sum metric.
struct ProductPoint {
  LatticePoint z;
  std::size_t g = 0;
};

// (a + m)-cube in Z^a (+) ds: side min(M, side_i), the Z factor stepped by
// s_i so both factors dilate by C = s_i.
inline std::optional<DilatedCube<ProductPoint>> product_cube(const TruncatedDirectSum& ds, std::size_t i,
                                                             std::size_t k, std::size_t dim, std::size_t a,
                                                             std::size_t m, std::size_t M) {
  const std::size_t side = std::min(M, k / 2);
  const auto g = direct_sum_cube(ds, i, k, dim, m, side);
  if (!g || !ds.scales().at(i).is_integer()) return std::nullopt;
  const std::int64_t step = ds.scales().at(i).num();
  DilatedCube<ProductPoint> cube{a + m, side, ds.scales().at(i), {}};
  for (std::size_t x = 0; x < cube.grid_size(); ++x) {
    const auto c = grid_coords(a + m, side, x);
    ProductPoint p;
    p.z.resize(a);
    for (std::size_t j = 0; j < a; ++j) p.z[j] = step * static_cast<std::int64_t>(c[j]);
    std::size_t gid = 0;
    for (std::size_t j = a; j < a + m; ++j) gid = gid * (side + 1) + c[j];
    p.g = g->image[gid];
    cube.image.push_back(std::move(p));
  }
  return cube;
}

inline Rational product_distance(const TruncatedDirectSum& ds, const ProductPoint& x, const ProductPoint& y) {
  return Rational(l1_distance(x.z, y.z)) + ds.distance(x.g, y.g);
}

}  // namespace coarsedim
