#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "coarsedim/core/errors.hpp"
#include "coarsedim/core/parallel.hpp"
#include "coarsedim/core/rational.hpp"
#include "coarsedim/metric/space.hpp"

namespace coarsedim {

// Slack for floating comparisons: lhs <= rhs + kConeSlack passes, and a pass
// that needed the slack is marked marginal.
inline const long double kConeSlack = std::ldexp(1.0L, -40);

struct SlackComparison {
  bool pass = true;
  bool marginal = false;
};

inline SlackComparison slack_le(long double lhs, long double rhs) {
  if (lhs <= rhs) return {true, false};
  if (lhs <= rhs + kConeSlack) return {true, true};
  return {false, false};
}

inline long double log_base(long double x, const Rational& base) { return std::log(x) / std::log(base.to_long_double()); }

// d'(x, y) = log_base(1 + d(x, y)).
template <MetricSpace S>
DenseMetric<long double> log_rescale(const S& space, const Rational& base = Rational(10)) {
  if (!(Rational(1) < base)) throw InvalidArgument("log base must exceed 1, got " + base.str());
  const std::size_t n = space.size();
  DenseMetric<long double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      out.set(i, j, log_base(1.0L + static_cast<long double>(Rational(space.distance(i, j)).to_long_double()), base));
  return out;
}

template <class T>
long double as_real(const T& v) {
  if constexpr (std::is_same_v<T, Rational>) return v.to_long_double();
  else return static_cast<long double>(v);
}

// Triangle inequality on a floating metric, within the slack.
struct TriangleReport {
  bool pass = true;
  bool marginal = false;
  std::array<std::size_t, 3> worst{};
};

template <MetricSpace S>
TriangleReport check_triangles_real(const S& space) {
  TriangleReport rep;
  const std::size_t n = space.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        const auto c = slack_le(as_real(space.distance(x, z)),
                                as_real(space.distance(x, y)) + as_real(space.distance(y, z)));
        rep.marginal = rep.marginal || c.marginal;
        if (!c.pass && rep.pass) {
          rep.pass = false;
          rep.worst = {x, y, z};
        }
      }
  return rep;
}

struct DefectTriple {
  std::size_t x = 0, y = 0, z = 0;
  long double d_xy = 0, max_side = 0, defect = 0;
};

// k = sup over triples of distinct points of d(x,y) - max(d(x,z), d(y,z)).
// Always >= 0 once there are 3 points (take x, y the longest side).
struct DefectResult {
  long double k = 0;
  bool degenerate = false;  // fewer than 3 points
  std::optional<DefectTriple> worst;
  std::uint64_t pairs = 0;
};

// Exhaustive; per pair the worst z minimizes max(d(x,z), d(y,z)).
template <MetricSpace S>
DefectResult ultrametric_defect(const S& space) {
  DefectResult out;
  const std::size_t n = space.size();
  if (n < 3) {
    out.degenerate = true;
    return out;
  }
  bool first = true;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) {
      ++out.pairs;
      std::size_t arg = n;
      long double best = std::numeric_limits<long double>::infinity();
      for (std::size_t z = 0; z < n; ++z) {
        if (z == x || z == y) continue;
        const long double m = std::max(as_real(space.distance(x, z)), as_real(space.distance(y, z)));
        if (m < best) {
          best = m;
          arg = z;
        }
      }
      const long double dxy = as_real(space.distance(x, y));
      const long double defect = dxy - best;
      if (first || defect > out.k) {
        out.k = defect;
        out.worst = DefectTriple{x, y, arg, dxy, best, defect};
        first = false;
      }
    }
  return out;
}

// epsilon evaluated at d = d(x, y); +infinity where undefined.
struct EpsilonForm {
  std::string name;
  std::function<long double(long double)> eps;
  long double k = 0;

  // eps(d) = log 2 / log(d/2 + 1), infinite at d = 0.
  static EpsilonForm paper(long double k) {
    return {"log2/log(d/2+1)",
            [](long double d) {
              if (!(d > 0)) return std::numeric_limits<long double>::infinity();
              return std::log(2.0L) / std::log(d / 2 + 1);
            },
            k};
  }
  static EpsilonForm zero(long double k) { return {"0", [](long double) { return 0.0L; }, k}; }
};

struct EpsilonReport {
  bool pass = true;
  bool marginal = false;
  std::uint64_t triples = 0;
  std::optional<DefectTriple> worst;  // largest lhs - rhs; defect holds that gap
};

namespace detail {

inline long double epsilon_rhs(const EpsilonForm& e, long double dxy, long double m) {
  const long double eps = e.eps(dxy);
  if (std::isinf(eps)) return std::numeric_limits<long double>::infinity();
  return (1 + eps) * m + e.k;
}

}  // namespace detail

// d(x,y) <= (1 + eps(d(x,y))) * max(d(x,z), d(y,z)) + k over all ordered
// triples of distinct points.
template <MetricSpace S>
EpsilonReport epsilon_hypothesis_check(const S& space, const EpsilonForm& e) {
  EpsilonReport rep;
  const std::size_t n = space.size();
  long double worst_gap = -std::numeric_limits<long double>::infinity();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        if (x == y || z == x || z == y) continue;
        ++rep.triples;
        const long double dxy = as_real(space.distance(x, y));
        const long double m = std::max(as_real(space.distance(x, z)), as_real(space.distance(y, z)));
        const long double rhs = detail::epsilon_rhs(e, dxy, m);
        const auto c = slack_le(dxy, rhs);
        rep.marginal = rep.marginal || c.marginal;
        rep.pass = rep.pass && c.pass;
        if (dxy - rhs > worst_gap) {
          worst_gap = dxy - rhs;
          rep.worst = DefectTriple{x, y, z, dxy, m, dxy - rhs};
        }
      }
  return rep;
}

// Integer distances up to 255 in a dense byte table, for large spaces whose
// rescaled metric is phi(d) with phi increasing. Every triple check below
// depends on z only through max(d(x,z), d(y,z)), and is monotone in it, so
// the per-pair minimum over z decides all triples exactly.
class ByteMetric {
 public:
  using distance_type = std::int64_t;

  explicit ByteMetric(std::size_t n) : n_(n), d_(n * n, 0) {}

  template <class F>
  static ByteMetric from_function(std::size_t n, F&& dist) {
    ByteMetric m(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto v = static_cast<std::int64_t>(dist(i, j));
        if (v <= 0 || v > 255) throw InvalidArgument("byte metric distance out of range: " + std::to_string(v));
        m.d_[i * n + j] = m.d_[j * n + i] = static_cast<std::uint8_t>(v);
      }
    return m;
  }

  std::size_t size() const noexcept { return n_; }
  std::int64_t distance(std::size_t i, std::size_t j) const noexcept { return d_[i * n_ + j]; }
  const std::uint8_t* row(std::size_t i) const noexcept { return d_.data() + i * n_; }
  std::uint8_t* mutable_row(std::size_t i) noexcept { return d_.data() + i * n_; }

 private:
  std::size_t n_;
  std::vector<std::uint8_t> d_;
};

// Per unordered pair (x < y), the minimum over z != x, y of
// max(d(x,z), d(y,z)); stored at [x * n + y].
inline std::vector<std::uint8_t> pair_minimax(const ByteMetric& m) {
  const std::size_t n = m.size();
  std::vector<std::uint8_t> out(n * n, 255);
  parallel_chunks(n, worker_count(), [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t x = begin; x < end; ++x) {
      const std::uint8_t* a = m.row(x);
      for (std::size_t y = x + 1; y < n; ++y) {
        const std::uint8_t* b = m.row(y);
        std::uint8_t best = 255;
        const auto scan = [&](std::size_t lo, std::size_t hi) {
          for (std::size_t z = lo; z < hi; ++z) {
            const std::uint8_t v = a[z] > b[z] ? a[z] : b[z];
            best = v < best ? v : best;
          }
        };
        scan(0, x);
        scan(x + 1, y);
        scan(y + 1, n);
        out[x * n + y] = best;
      }
    }
  });
  return out;
}

inline std::size_t minimax_witness(const ByteMetric& m, std::size_t x, std::size_t y, std::uint8_t value) {
  for (std::size_t z = 0; z < m.size(); ++z)
    if (z != x && z != y && std::max(m.distance(x, z), m.distance(y, z)) == value) return z;
  return m.size();
}

// Defect of phi(d) on a byte metric; phi increasing with phi(0) = 0.
inline DefectResult ultrametric_defect_rescaled(const ByteMetric& m, const std::vector<std::uint8_t>& minimax,
                                                const std::function<long double(long double)>& phi) {
  DefectResult out;
  const std::size_t n = m.size();
  if (n < 3) {
    out.degenerate = true;
    return out;
  }
  std::array<long double, 256> table{};
  for (int v = 0; v < 256; ++v) table[v] = phi(v);
  bool first = true;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) {
      ++out.pairs;
      const auto dv = m.row(x)[y];
      const auto mv = minimax[x * n + y];
      const long double defect = table[dv] - table[mv];
      if (first || defect > out.k) {
        out.k = defect;
        out.worst = DefectTriple{x, y, n, table[dv], table[mv], defect};
        first = false;
      }
    }
  out.worst->z = minimax_witness(m, out.worst->x, out.worst->y, minimax[out.worst->x * n + out.worst->y]);
  return out;
}

inline EpsilonReport epsilon_check_rescaled(const ByteMetric& m, const std::vector<std::uint8_t>& minimax,
                                            const std::function<long double(long double)>& phi,
                                            const EpsilonForm& e) {
  EpsilonReport rep;
  const std::size_t n = m.size();
  std::array<long double, 256> table{};
  for (int v = 0; v < 256; ++v) table[v] = phi(v);
  long double worst_gap = -std::numeric_limits<long double>::infinity();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) {
      ++rep.triples;
      const long double dxy = table[m.row(x)[y]];
      const long double mm = table[minimax[x * n + y]];
      const long double rhs = detail::epsilon_rhs(e, dxy, mm);
      const auto c = slack_le(dxy, rhs);
      rep.marginal = rep.marginal || c.marginal;
      rep.pass = rep.pass && c.pass;
      if (dxy - rhs > worst_gap) {
        worst_gap = dxy - rhs;
        rep.worst = DefectTriple{x, y, n, dxy, mm, dxy - rhs};
      }
    }
  if (rep.worst) rep.worst->z = minimax_witness(m, rep.worst->x, rep.worst->y, minimax[rep.worst->x * n + rep.worst->y]);
  return rep;
}

inline void write_defect_csv(std::ostream& out, const std::vector<DefectTriple>& rows) {
  out << "x,y,z,d_xy,max_side,defect\n";
  out.precision(18);
  for (const auto& r : rows)
    out << r.x << ',' << r.y << ',' << r.z << ',' << r.d_xy << ',' << r.max_side << ',' << r.defect << '\n';
}

}  // namespace coarsedim
