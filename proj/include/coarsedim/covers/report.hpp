#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "coarsedim/core/errors.hpp"
#include "coarsedim/core/rational.hpp"
#include "coarsedim/covers/cube.hpp"
#include "coarsedim/covers/reflection.hpp"
#include "coarsedim/direct_sum/direct_sum.hpp"
#include "coarsedim/direct_sum/pullback.hpp"

namespace coarsedim {

// G^n truncated to (+)_{i<=m} Z_{k_i}^n with minimal scales, optionally
// multiplied by Z^a with the l1-sum metric (a > 0 is the product family).
struct FamilyDescriptor {
  std::string kind = "direct-sum";  // "direct-sum" or "product"
  std::vector<std::size_t> moduli;  // k_i
  std::size_t n = 2;                // summand dimension
  std::size_t lattice_dim = 0;      // a, product family only
  std::size_t lattice_side = 3;     // M, product family only
};

inline TruncatedDirectSum build_family(const FamilyDescriptor& f) {
  if (f.kind != "direct-sum" && f.kind != "product") throw InvalidArgument("unknown family '" + f.kind + "'");
  if (f.moduli.empty()) throw InvalidArgument("family needs at least one modulus");
  std::vector<SummandSpec> summands;
  for (std::size_t k : f.moduli) summands.push_back(SummandSpec::cyclic_power(k, f.n));
  return TruncatedDirectSum::minimal(std::move(summands));
}

struct UpperRow {
  Rational scale;
  std::size_t n = 0;
  std::int64_t ratio = 0;  // certified C
  Rational max_component_diameter;
  bool pass = false;
};

struct LowerRow {
  std::size_t dimension = 0;
  std::size_t summand = 0;
  std::size_t side = 0;
  Rational C;
  bool verified = false;
};

struct DimensionReport {
  std::vector<UpperRow> upper;
  std::vector<LowerRow> lower;
  bool pass() const {
    for (const auto& r : upper)
      if (!r.pass) return false;
    for (const auto& r : lower)
      if (!r.verified) return false;
    return true;
  }
};

// Pullback of the reflection cover of Z_{k_i}^n at s / s_i, bounded by C_n s.
inline UpperRow upper_row(const TruncatedDirectSum& ds, const FamilyDescriptor& f, const Rational& s) {
  const Cover cover = pullback_cover_with(ds, s, f.n + 1, [&](std::size_t i, const Rational& t) {
    return reflection_cover(f.n, f.moduli[i - 1], t).cover;
  });
  const auto bound = pullback_component_bound(ds, cover, s);
  UpperRow row{s, f.n, reflection_ratio(f.n), bound.diameter, false};
  row.pass = !(Rational(row.ratio) * s < bound.diameter);
  return row;
}

// Lower rows for every m <= n (direct sum) or for m = a + n (product
// family), one per summand.
inline std::vector<LowerRow> lower_rows(const TruncatedDirectSum& ds, const FamilyDescriptor& f) {
  std::vector<LowerRow> rows;
  if (f.kind == "direct-sum") {
    for (std::size_t m = 1; m <= f.n; ++m)
      for (std::size_t i = 1; i <= ds.summand_count(); ++i) {
        const std::size_t side = f.moduli[i - 1] / 2;
        const auto cube = direct_sum_cube(ds, i, f.moduli[i - 1], f.n, m, side);
        LowerRow row{m, i, side, ds.scales().at(i), false};
        if (cube) row.verified = verify_dilated_cube(*cube, [&](std::size_t a, std::size_t b) {
                                   return ds.distance(a, b);
                                 }).pass;
        rows.push_back(row);
      }
  } else {
    for (std::size_t i = 1; i <= ds.summand_count(); ++i) {
      const auto cube = product_cube(ds, i, f.moduli[i - 1], f.n, f.lattice_dim, f.n, f.lattice_side);
      LowerRow row{f.lattice_dim + f.n, i, std::min(f.lattice_side, f.moduli[i - 1] / 2), ds.scales().at(i), false};
      if (cube) row.verified = verify_dilated_cube(*cube, [&](const ProductPoint& a, const ProductPoint& b) {
                                 return product_distance(ds, a, b);
                               }).pass;
      rows.push_back(row);
    }
  }
  return rows;
}

// Upper rows for the direct-sum family only.
inline DimensionReport dimension_report(const FamilyDescriptor& f, const std::vector<Rational>& scales) {
  const TruncatedDirectSum ds = build_family(f);
  DimensionReport rep;
  if (scales.empty()) return rep;
  if (f.kind == "direct-sum")
    for (const auto& s : scales) rep.upper.push_back(upper_row(ds, f, s));
  rep.lower = lower_rows(ds, f);
  return rep;
}

inline void write_upper_csv(std::ostream& out, const std::vector<UpperRow>& rows) {
  out << "scale,n,cover_ratio_certified,max_component_diam,bound,verdict\n";
  for (const auto& r : rows)
    out << r.scale.str() << ',' << r.n << ',' << r.ratio << ',' << r.max_component_diameter.str() << ','
        << (Rational(r.ratio) * r.scale).str() << ',' << (r.pass ? "pass" : "fail") << '\n';
}

inline void write_lower_csv(std::ostream& out, const std::vector<LowerRow>& rows) {
  out << "dimension,summand,cube_side,dilation_C,verdict\n";
  for (const auto& r : rows)
    out << r.dimension << ',' << r.summand << ',' << r.side << ',' << r.C.str() << ','
        << (r.verified ? "pass" : "fail") << '\n';
}

}  // namespace coarsedim
