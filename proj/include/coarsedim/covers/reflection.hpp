#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coarsedim/core/errors.hpp"
#include "coarsedim/core/rational.hpp"
#include "coarsedim/covers/lattice.hpp"
#include "coarsedim/group/table.hpp"
#include "coarsedim/metric/components.hpp"
#include "coarsedim/metric/space.hpp"

namespace coarsedim {

// Z_k^n with the l1 sum of cyclic word lengths. Point ids follow
// FiniteGroupTable::cyclic_power(k, n): coordinate 0 most significant.
class CyclicLattice {
 public:
  using distance_type = Rational;

  CyclicLattice(std::size_t k, std::size_t n) : k_(k), n_(n), moduli_(n, k) {
    if (k < 2) throw InvalidArgument("Z_k needs k > 1");
    if (n == 0) throw InvalidArgument("dimension must be at least 1");
    size_ = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (size_ > FiniteGroupTable::kMaxOrder / k) throw ResourceError("Z_k^n too large to enumerate");
      size_ *= k;
    }
  }

  std::size_t k() const noexcept { return k_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t r() const noexcept { return k_ / 2; }
  std::size_t size() const noexcept { return size_; }

  std::vector<std::size_t> coords(std::size_t p) const {
    std::vector<std::size_t> c;
    FiniteGroupTable::decode(moduli_, p, c);
    return c;
  }
  std::size_t id(const std::vector<std::size_t>& c) const { return FiniteGroupTable::encode(moduli_, c); }

  // Representative in {-r, ..., r}; for even k the residue r maps to +r.
  std::int64_t signed_rep(std::size_t residue) const {
    const auto x = static_cast<std::int64_t>(residue);
    return x <= static_cast<std::int64_t>(r()) ? x : x - static_cast<std::int64_t>(k_);
  }
  std::size_t residue(std::int64_t x) const {
    const auto k = static_cast<std::int64_t>(k_);
    return static_cast<std::size_t>(((x % k) + k) % k);
  }

  std::int64_t cyclic(std::size_t a, std::size_t b) const {
    const std::size_t d = a > b ? a - b : b - a;
    return static_cast<std::int64_t>(d < k_ - d ? d : k_ - d);
  }

  Rational distance(std::size_t a, std::size_t b) const {
    std::int64_t d = 0;
    std::size_t x = a, y = b;
    for (std::size_t i = 0; i < n_; ++i) {
      d += cyclic(x % k_, y % k_);
      x /= k_;
      y /= k_;
    }
    return Rational(d);
  }

  std::int64_t diameter() const { return static_cast<std::int64_t>(n_ * r()); }

  // p_lambda: negate every coordinate whose bit in `keep` is clear.
  std::size_t reflect(std::size_t p, std::uint64_t keep) const {
    auto c = coords(p);
    for (std::size_t i = 0; i < n_; ++i)
      if (!(keep >> i & 1)) c[i] = residue(-signed_rep(c[i]));
    return id(c);
  }

  // |rep| coordinatewise: the point of {0..r}^n that reflects onto p.
  LatticePoint fold(std::size_t p) const {
    const auto c = coords(p);
    LatticePoint out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const std::int64_t v = signed_rep(c[i]);
      out[i] = v < 0 ? -v : v;
    }
    return out;
  }

 private:
  std::size_t k_, n_;
  std::vector<std::size_t> moduli_;
  std::size_t size_ = 1;
};

struct ReflectionCover {
  Cover cover;
  std::int64_t lattice_ratio = 0;  // C_n'
  std::int64_t ratio = 0;          // C_n = 2^n (C_n' + 1)
  Rational max_component_diameter;
  std::size_t component_count = 0;
};

inline std::int64_t reflection_ratio(std::size_t n) {
  return (std::int64_t{1} << n) * (LatticeCoverSpec::certified_ratio(n) + 1);
}

// U_j = union over lambda of p_lambda(V_j cap {0..r}^n), V_j the lattice
// classes at scale s. Since p_lambda(z) = x forces z = fold(x), x lies in U_j
// iff fold(x) lies in V_j. Self-certifies every s-component at C_n * s.
inline ReflectionCover reflection_cover(std::size_t n, std::size_t k, const Rational& s) {
  const CyclicLattice z(k, n);
  const LatticeCoverSpec spec(n, s);
  ReflectionCover out;
  out.lattice_ratio = spec.certified_ratio();
  out.ratio = reflection_ratio(n);
  out.cover.classes.resize(n + 1);
  for (std::size_t p = 0; p < z.size(); ++p) {
    const auto f = z.fold(p);
    bool any = false;
    for (std::size_t j = 0; j <= n; ++j)
      if (spec.in_class(j, f)) {
        out.cover.classes[j].push_back(p);
        any = true;
      }
    if (!any) throw InternalError("reflection cover misses point " + std::to_string(p));
  }
  const auto bound = component_diameter_bound(z, out.cover, s);
  out.max_component_diameter = bound.diameter;
  out.component_count = bound.component_count;
  if (Rational(out.ratio) * s < bound.diameter) {
    std::string comp;
    for (std::size_t p : bound.component) comp += (comp.empty() ? "" : " ") + std::to_string(p);
    throw InternalError("reflection cover component {" + comp + "} of class " + std::to_string(bound.class_index) +
                        " has diameter " + bound.diameter.str() + " above " + std::to_string(out.ratio) + " * " +
                        s.str());
  }
  return out;
}

struct ReflectionViolation {
  std::string property;
  std::string detail;
};

// Every p_lambda preserves distances on Z_k^n.
inline std::optional<ReflectionViolation> check_reflection_isometries(std::size_t n, std::size_t k) {
  const CyclicLattice z(k, n);
  for (std::uint64_t keep = 0; keep < (std::uint64_t{1} << n); ++keep)
    for (std::size_t a = 0; a < z.size(); ++a)
      for (std::size_t b = a + 1; b < z.size(); ++b)
        if (z.distance(z.reflect(a, keep), z.reflect(b, keep)) != z.distance(a, b))
          return ReflectionViolation{"isometry", "lambda=" + std::to_string(keep) + " x=" + std::to_string(a) +
                                                     " y=" + std::to_string(b)};
  return std::nullopt;
}

// Distinct s-components L, M of V_j cap {0..r}^n have
// d(p_l1(L), p_l2(M)) >= s for all reflections.
inline std::optional<ReflectionViolation> check_reflection_separation(std::size_t n, std::size_t k,
                                                                      const Rational& s) {
  const CyclicLattice z(k, n);
  const LatticeCoverSpec spec(n, s);
  const auto rr = static_cast<std::int64_t>(z.r());
  std::vector<std::size_t> box;
  for (std::size_t p = 0; p < z.size(); ++p) {
    const auto c = z.coords(p);
    bool inside = true;
    for (std::size_t v : c) inside = inside && static_cast<std::int64_t>(v) <= rr;
    if (inside) box.push_back(p);
  }
  const std::uint64_t flips = std::uint64_t{1} << n;
  for (std::size_t j = 0; j <= n; ++j) {
    std::vector<std::size_t> cls;
    for (std::size_t p : box)
      if (spec.in_class(j, z.fold(p))) cls.push_back(p);
    const auto parts = scale_components(z, cls, s);
    for (std::size_t a = 0; a < parts.size(); ++a)
      for (std::size_t b = 0; b < parts.size(); ++b) {
        if (a == b) continue;
        for (std::uint64_t l1 = 0; l1 < flips; ++l1)
          for (std::uint64_t l2 = 0; l2 < flips; ++l2)
            for (std::size_t x : parts[a])
              for (std::size_t y : parts[b])
                if (z.distance(z.reflect(x, l1), z.reflect(y, l2)) < s)
                  return ReflectionViolation{"separation", "class=" + std::to_string(j) + " x=" +
                                                               std::to_string(x) + " y=" + std::to_string(y)};
      }
  }
  return std::nullopt;
}

}  // namespace coarsedim
