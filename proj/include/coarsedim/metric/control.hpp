#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "coarsedim/core/errors.hpp"
#include "coarsedim/core/rational.hpp"
#include "coarsedim/metric/components.hpp"
#include "coarsedim/metric/space.hpp"

namespace coarsedim {

namespace control {

// C*s + k with C > 0.
struct Linear {
  Rational C{1};
  Rational k{0};
};

// sum_i c_i s^i; coefficients of degree >= 1 must be nonnegative.
struct Polynomial {
  std::vector<Rational> coeffs;
};

// C*log_base(1 + s) + b with base > 1, C > 0.
struct LogAffine {
  Rational base{10};
  Rational C{1};
  Rational b{0};
};

// base^((s - b)/C) - 1, the inverse of LogAffine with the same parameters.
struct ExpAffine {
  Rational base{10};
  Rational C{1};
  Rational b{0};
};

// Sorted samples (x_i, y_i), piecewise constant from the right: the value on
// (x_i, x_{i+1}] is y_{i+1}, and y_0 on [0, x_0]. Undefined past the last x.
struct Tabulated {
  std::vector<std::pair<Rational, Rational>> samples;
};

// max(0, s).
struct ClampZero {};

// Upper generalized inverse of a polynomial, evaluated by bisection.
struct PolynomialInverse {
  Polynomial poly;
};

// Upper generalized inverse of a tabulated function.
struct TabulatedInverse {
  Tabulated table;
};

using Piece = std::variant<Linear, Polynomial, LogAffine, ExpAffine, Tabulated, ClampZero,
                           PolynomialInverse, TabulatedInverse>;

enum class Divergence { kDiverges, kBounded, kUnverifiable };

namespace detail {

inline long double ld(const Rational& r) { return r.to_long_double(); }

inline long double eval_poly(const Polynomial& p, long double x) {
  long double acc = 0;
  for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) acc = acc * x + ld(*it);
  return acc;
}

inline std::optional<Rational> eval_poly_exact(const Polynomial& p, const Rational& x) {
  try {
    Rational acc(0);
    for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
  } catch (const std::overflow_error&) {
    return std::nullopt;
  }
}

inline const std::pair<Rational, Rational>& tab_lookup(const Tabulated& t, const Rational& x) {
  if (t.samples.empty()) throw InvalidArgument("empty tabulated control function");
  if (x > t.samples.back().first)
    throw OutOfRange("tabulated control function queried at " + x.str() + " beyond last sample " +
                     t.samples.back().first.str());
  // First sample with x_i >= x.
  auto it = std::lower_bound(t.samples.begin(), t.samples.end(), x,
                             [](const auto& s, const Rational& v) { return s.first < v; });
  return *it;
}

inline Rational tab_inverse(const Tabulated& t, const Rational& y) {
  if (t.samples.empty()) throw InvalidArgument("empty tabulated control function");
  if (t.samples.back().second <= y)
    throw OutOfRange("generalized inverse of tabulated function unbounded at " + y.str());
  if (y < t.samples.front().second) return Rational(0);
  // Largest j with y_j <= y; f <= y on [0, x_j] and f > y right after.
  auto it = std::upper_bound(t.samples.begin(), t.samples.end(), y,
                             [](const Rational& v, const auto& s) { return v < s.second; });
  return std::prev(it)->first;
}

inline long double poly_inverse(const Polynomial& p, long double t) {
  if (t < eval_poly(p, 0.0L)) return 0.0L;
  bool grows = false;
  for (std::size_t i = 1; i < p.coeffs.size(); ++i) grows = grows || p.coeffs[i].is_positive();
  if (!grows) throw OutOfRange("generalized inverse of a constant polynomial is unbounded");
  long double lo = 0, hi = 1;
  while (eval_poly(p, hi) <= t) hi *= 2;
  for (int i = 0; i < 200 && hi - lo > 0; ++i) {
    const long double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    (eval_poly(p, mid) <= t ? lo : hi) = mid;
  }
  return lo;
}

inline long double eval_piece(const Piece& piece, long double x) {
  return std::visit(
      [x](const auto& p) -> long double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, Linear>) {
          return ld(p.C) * x + ld(p.k);
        } else if constexpr (std::is_same_v<P, Polynomial>) {
          return eval_poly(p, x);
        } else if constexpr (std::is_same_v<P, LogAffine>) {
          return ld(p.C) * (std::log1p(x) / std::log(ld(p.base))) + ld(p.b);
        } else if constexpr (std::is_same_v<P, ExpAffine>) {
          return std::pow(ld(p.base), (x - ld(p.b)) / ld(p.C)) - 1.0L;
        } else if constexpr (std::is_same_v<P, Tabulated>) {
          // Exact lookup on the largest rational not above x is not needed:
          // compare in long double against the sample abscissae.
          if (p.samples.empty()) throw InvalidArgument("empty tabulated control function");
          if (x > ld(p.samples.back().first))
            throw OutOfRange("tabulated control function queried beyond last sample");
          for (const auto& [sx, sy] : p.samples)
            if (x <= ld(sx)) return ld(sy);
          return ld(p.samples.back().second);
        } else if constexpr (std::is_same_v<P, ClampZero>) {
          return x < 0 ? 0.0L : x;
        } else if constexpr (std::is_same_v<P, PolynomialInverse>) {
          return poly_inverse(p.poly, x);
        } else {
          if (p.table.samples.empty()) throw InvalidArgument("empty tabulated control function");
          if (ld(p.table.samples.back().second) <= x)
            throw OutOfRange("generalized inverse of tabulated function unbounded");
          if (x < ld(p.table.samples.front().second)) return 0.0L;
          long double best = 0;
          for (const auto& [sx, sy] : p.table.samples)
            if (ld(sy) <= x) best = ld(sx);
          return best;
        }
      },
      piece);
}

inline std::optional<Rational> eval_piece_exact(const Piece& piece, const Rational& x) {
  return std::visit(
      [&x](const auto& p) -> std::optional<Rational> {
        using P = std::decay_t<decltype(p)>;
        try {
          if constexpr (std::is_same_v<P, Linear>) {
            return p.C * x + p.k;
          } else if constexpr (std::is_same_v<P, Polynomial>) {
            return eval_poly_exact(p, x);
          } else if constexpr (std::is_same_v<P, Tabulated>) {
            return tab_lookup(p, x).second;
          } else if constexpr (std::is_same_v<P, ClampZero>) {
            return x.is_negative() ? Rational(0) : x;
          } else if constexpr (std::is_same_v<P, TabulatedInverse>) {
            return tab_inverse(p.table, x);
          } else {
            return std::nullopt;
          }
        } catch (const std::overflow_error&) {
          return std::nullopt;
        }
      },
      piece);
}

inline bool is_identity(const Piece& p) {
  const auto* lin = std::get_if<Linear>(&p);
  return lin && lin->C == Rational(1) && lin->k.is_zero();
}

inline bool is_closed_form(const Piece& p) {
  return !std::holds_alternative<Tabulated>(p) && !std::holds_alternative<TabulatedInverse>(p);
}

inline std::string rat_list(const std::vector<Rational>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i].str();
  return out;
}

inline std::string sample_list(const Tabulated& t) {
  std::string out;
  for (std::size_t i = 0; i < t.samples.size(); ++i)
    out += (i ? "," : "") + t.samples[i].first.str() + ":" + t.samples[i].second.str();
  return out;
}

inline std::string piece_str(const Piece& piece) {
  return std::visit(
      [](const auto& p) -> std::string {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, Linear>) {
          return "linear C=" + p.C.str() + " k=" + p.k.str();
        } else if constexpr (std::is_same_v<P, Polynomial>) {
          return "poly c=" + rat_list(p.coeffs);
        } else if constexpr (std::is_same_v<P, LogAffine>) {
          return "logaffine base=" + p.base.str() + " C=" + p.C.str() + " b=" + p.b.str();
        } else if constexpr (std::is_same_v<P, ExpAffine>) {
          return "expaffine base=" + p.base.str() + " C=" + p.C.str() + " b=" + p.b.str();
        } else if constexpr (std::is_same_v<P, Tabulated>) {
          return "tab " + sample_list(p);
        } else if constexpr (std::is_same_v<P, ClampZero>) {
          return "clamp0";
        } else if constexpr (std::is_same_v<P, PolynomialInverse>) {
          return "polyinv c=" + rat_list(p.poly.coeffs);
        } else {
          return "tabinv " + sample_list(p.table);
        }
      },
      piece);
}

inline void validate_piece(const Piece& piece) {
  std::visit(
      [](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        auto poly_ok = [](const Polynomial& q) {
          if (q.coeffs.empty()) throw InvalidArgument("polynomial needs at least one coefficient");
          for (std::size_t i = 1; i < q.coeffs.size(); ++i)
            if (q.coeffs[i].is_negative())
              throw InvalidArgument("polynomial coefficient of degree " + std::to_string(i) +
                                    " is negative; monotonicity not guaranteed");
        };
        auto tab_ok = [](const Tabulated& t) {
          if (t.samples.empty()) throw InvalidArgument("tabulated form needs samples");
          for (std::size_t i = 0; i < t.samples.size(); ++i) {
            if (t.samples[i].first.is_negative())
              throw InvalidArgument("tabulated abscissa must be nonnegative");
            if (i && !(t.samples[i - 1].first < t.samples[i].first))
              throw InvalidArgument("tabulated abscissae must be strictly increasing");
            if (i && t.samples[i].second < t.samples[i - 1].second)
              throw InvalidArgument("tabulated values must be nondecreasing");
          }
        };
        if constexpr (std::is_same_v<P, Linear>) {
          if (!p.C.is_positive()) throw InvalidArgument("linear control needs C > 0");
        } else if constexpr (std::is_same_v<P, Polynomial>) {
          poly_ok(p);
        } else if constexpr (std::is_same_v<P, LogAffine> || std::is_same_v<P, ExpAffine>) {
          if (!(Rational(1) < p.base)) throw InvalidArgument("logarithm base must exceed 1");
          if (!p.C.is_positive()) throw InvalidArgument("log/exp affine form needs C > 0");
        } else if constexpr (std::is_same_v<P, Tabulated>) {
          tab_ok(p);
        } else if constexpr (std::is_same_v<P, PolynomialInverse>) {
          poly_ok(p.poly);
        } else if constexpr (std::is_same_v<P, TabulatedInverse>) {
          tab_ok(p.table);
        }
      },
      piece);
}

}  // namespace detail
}  // namespace control

// A monotone nondecreasing function R+ -> R+, stored as a pipeline of pieces
// applied first to last. Single-piece pipelines are the basic forms; longer
// ones come out of composition and inversion.
class ControlFunction {
 public:
  using Piece = control::Piece;

  ControlFunction() : pieces_{control::Linear{}} {}
  ControlFunction(Piece piece) : pieces_{std::move(piece)} {  // NOLINT
    control::detail::validate_piece(pieces_.front());
  }

  static ControlFunction identity() { return ControlFunction(control::Linear{}); }
  static ControlFunction linear(Rational C, Rational k = Rational(0)) {
    return ControlFunction(control::Linear{C, k});
  }
  static ControlFunction polynomial(std::vector<Rational> coeffs) {
    return ControlFunction(control::Polynomial{std::move(coeffs)});
  }
  static ControlFunction log_affine(Rational base, Rational C = Rational(1), Rational b = Rational(0)) {
    return ControlFunction(control::LogAffine{base, C, b});
  }
  static ControlFunction tabulated(std::vector<std::pair<Rational, Rational>> samples) {
    return ControlFunction(control::Tabulated{std::move(samples)});
  }

  const std::vector<Piece>& pieces() const noexcept { return pieces_; }

  long double operator()(long double s) const {
    for (const auto& p : pieces_) s = control::detail::eval_piece(p, s);
    return s;
  }

  // Exact value when every piece is rational-valued at the argument.
  std::optional<Rational> exact(const Rational& s) const {
    std::optional<Rational> v = s;
    for (const auto& p : pieces_) {
      v = control::detail::eval_piece_exact(p, *v);
      if (!v) return std::nullopt;
    }
    return v;
  }

  bool is_closed_form() const {
    return std::all_of(pieces_.begin(), pieces_.end(), control::detail::is_closed_form);
  }

  bool is_identity() const {
    return std::all_of(pieces_.begin(), pieces_.end(), control::detail::is_identity);
  }

  control::Divergence divergence() const {
    using control::Divergence;
    for (const auto& piece : pieces_) {
      if (!control::detail::is_closed_form(piece)) return Divergence::kUnverifiable;
      if (const auto* poly = std::get_if<control::Polynomial>(&piece)) {
        bool grows = false;
        for (std::size_t i = 1; i < poly->coeffs.size(); ++i) grows = grows || poly->coeffs[i].is_positive();
        if (!grows) return Divergence::kBounded;
      }
    }
    return Divergence::kDiverges;
  }

  // Increasing and unbounded, checked analytically on closed forms.
  bool is_increasing_divergent() const { return divergence() == control::Divergence::kDiverges; }

  // f o g: apply g first, then this.
  ControlFunction after(const ControlFunction& g) const {
    ControlFunction out;
    out.pieces_ = g.pieces_;
    out.pieces_.insert(out.pieces_.end(), pieces_.begin(), pieces_.end());
    out.simplify();
    return out;
  }

  // Upper generalized inverse t -> sup{x >= 0 : f(x) <= t}, with 0 when t is
  // below f(0).
  ControlFunction upper_inverse() const {
    ControlFunction out;
    out.pieces_.clear();
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
      std::visit(
          [&out](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            using namespace control;
            if constexpr (std::is_same_v<P, Linear>) {
              out.pieces_.push_back(Linear{Rational(1) / p.C, -p.k / p.C});
              out.pieces_.push_back(ClampZero{});
            } else if constexpr (std::is_same_v<P, LogAffine>) {
              out.pieces_.push_back(ExpAffine{p.base, p.C, p.b});
              out.pieces_.push_back(ClampZero{});
            } else if constexpr (std::is_same_v<P, ExpAffine>) {
              out.pieces_.push_back(ClampZero{});
              out.pieces_.push_back(LogAffine{p.base, p.C, p.b});
              out.pieces_.push_back(ClampZero{});
            } else if constexpr (std::is_same_v<P, Polynomial>) {
              out.pieces_.push_back(PolynomialInverse{p});
            } else if constexpr (std::is_same_v<P, Tabulated>) {
              out.pieces_.push_back(TabulatedInverse{p});
            } else if constexpr (std::is_same_v<P, ClampZero>) {
              out.pieces_.push_back(ClampZero{});
            } else {
              throw InvalidArgument("generalized inverse of an inverse piece is not supported");
            }
          },
          *it);
    }
    out.simplify();
    return out;
  }

  // Tabulates this function on a grid. Values that are not exact are rounded
  // up to a multiple of 2^-32, so the table never undershoots.
  ControlFunction tabulate(const std::vector<Rational>& grid) const {
    std::vector<Rational> xs = grid;
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    if (xs.empty()) throw InvalidArgument("tabulation grid is empty");
    std::vector<std::pair<Rational, Rational>> samples;
    Rational prev(0);
    for (const auto& x : xs) {
      Rational y;
      if (auto e = exact(x)) {
        y = *e;
      } else {
        const long double v = (*this)(x.to_long_double());
        const long double scaled = std::ceil(v * 4294967296.0L);
        y = Rational(static_cast<std::int64_t>(scaled), std::int64_t{4294967296});
      }
      if (!samples.empty() && y < prev) y = prev;  // monotone envelope
      samples.emplace_back(x, y);
      prev = y;
    }
    return tabulated(std::move(samples));
  }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < pieces_.size(); ++i)
      out += (i ? " | " : "") + control::detail::piece_str(pieces_[i]);
    return out;
  }

  static ControlFunction parse(std::string_view text);

  friend bool operator==(const ControlFunction& a, const ControlFunction& b) {
    return a.str() == b.str();
  }

 private:
  void simplify() {
    std::vector<Piece> out;
    for (auto& p : pieces_) {
      if (control::detail::is_identity(p)) continue;
      if (!out.empty()) {
        auto* prev = std::get_if<control::Linear>(&out.back());
        const auto* cur = std::get_if<control::Linear>(&p);
        if (prev && cur) {
          // cur(prev(x)) = cur.C*(prev.C*x + prev.k) + cur.k
          *prev = control::Linear{cur->C * prev->C, cur->C * prev->k + cur->k};
          if (control::detail::is_identity(out.back())) out.pop_back();
          continue;
        }
        if (std::holds_alternative<control::ClampZero>(out.back()) &&
            std::holds_alternative<control::ClampZero>(p))
          continue;
      }
      out.push_back(p);
    }
    if (out.empty()) out.push_back(control::Linear{});
    pieces_ = std::move(out);
  }

  std::vector<Piece> pieces_;
};

namespace control::detail {

inline std::vector<Rational> parse_rat_list(std::string_view s) {
  std::vector<Rational> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    out.push_back(Rational::parse(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

inline Tabulated parse_samples(std::string_view s) {
  Tabulated t;
  while (!s.empty()) {
    const auto comma = s.find(',');
    const auto item = s.substr(0, comma);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw InvalidArgument("tabulated sample needs x:y");
    t.samples.emplace_back(Rational::parse(item.substr(0, colon)), Rational::parse(item.substr(colon + 1)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return t;
}

inline Piece parse_piece(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string tag;
  in >> tag;
  std::vector<std::pair<std::string, std::string>> fields;
  std::string rest, token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      rest += token;
    } else {
      fields.emplace_back(token.substr(0, eq), token.substr(eq + 1));
    }
  }
  auto field = [&](const std::string& key) -> std::string {
    for (const auto& [k, v] : fields)
      if (k == key) return v;
    throw InvalidArgument("control function '" + tag + "' is missing field " + key);
  };
  if (tag == "identity") return Linear{};
  if (tag == "linear") return Linear{Rational::parse(field("C")), Rational::parse(field("k"))};
  if (tag == "poly") return Polynomial{parse_rat_list(field("c"))};
  if (tag == "logaffine")
    return LogAffine{Rational::parse(field("base")), Rational::parse(field("C")), Rational::parse(field("b"))};
  if (tag == "expaffine")
    return ExpAffine{Rational::parse(field("base")), Rational::parse(field("C")), Rational::parse(field("b"))};
  if (tag == "tab") return parse_samples(rest);
  if (tag == "clamp0") return ClampZero{};
  if (tag == "polyinv") return PolynomialInverse{Polynomial{parse_rat_list(field("c"))}};
  if (tag == "tabinv") return TabulatedInverse{parse_samples(rest)};
  throw InvalidArgument("unknown control function form '" + tag + "'");
}

}  // namespace control::detail

// Tagged one-line form, e.g. "linear C=3/1 k=0/1"; pipelines join pieces with
// " | " in application order.
inline ControlFunction ControlFunction::parse(std::string_view text) {
  ControlFunction out;
  out.pieces_.clear();
  while (true) {
    const auto bar = text.find('|');
    const auto piece_text = text.substr(0, bar);
    if (piece_text.find_first_not_of(" \t") == std::string_view::npos)
      throw InvalidArgument("empty control function piece");
    out.pieces_.push_back(control::detail::parse_piece(piece_text));
    control::detail::validate_piece(out.pieces_.back());
    if (bar == std::string_view::npos) break;
    text.remove_prefix(bar + 1);
  }
  return out;
}

// Contraction and dilatation functions of a coarse embedding:
// rho_minus(d_X) <= d_Y(f x, f y) <= rho_plus(d_X).
struct CoarseEmbeddingProfile {
  ControlFunction rho_plus;
  ControlFunction rho_minus;
};

struct ProfileCheck {
  bool ok = true;
  control::Divergence rho_minus_divergence = control::Divergence::kDiverges;
  std::string message;
};

// Checks rho_minus <= rho_plus and monotonicity at the given points, and
// whether rho_minus provably diverges.
inline ProfileCheck check_profile(const CoarseEmbeddingProfile& profile,
                                  const std::vector<Rational>& points) {
  ProfileCheck out;
  out.rho_minus_divergence = profile.rho_minus.divergence();
  if (out.rho_minus_divergence == control::Divergence::kBounded) {
    out.ok = false;
    out.message = "rho_minus is bounded";
    return out;
  }
  std::vector<Rational> xs = points;
  std::sort(xs.begin(), xs.end());
  long double prev_minus = -1, prev_plus = -1;
  for (const auto& x : xs) {
    const long double lo = profile.rho_minus(x.to_long_double());
    const long double hi = profile.rho_plus(x.to_long_double());
    if (lo > hi) {
      out.ok = false;
      out.message = "rho_minus exceeds rho_plus at " + x.str();
      return out;
    }
    if (lo < prev_minus || hi < prev_plus) {
      out.ok = false;
      out.message = "profile not monotone at " + x.str();
      return out;
    }
    prev_minus = lo;
    prev_plus = hi;
  }
  if (out.rho_minus_divergence == control::Divergence::kUnverifiable)
    out.message = "rho_minus divergence unverifiable on tabulated form";
  return out;
}

// D_X = rho_minus^{-1} o D_Y o rho_plus. Closed-form inputs give a closed-form
// pipeline; otherwise the composition is tabulated on `grid`.
inline ControlFunction transport_control(const ControlFunction& target_control,
                                         const CoarseEmbeddingProfile& profile,
                                         const std::vector<Rational>& grid = {}) {
  const ControlFunction composed =
      profile.rho_minus.upper_inverse().after(target_control.after(profile.rho_plus));
  if (profile.rho_plus.is_closed_form() && profile.rho_minus.is_closed_form() &&
      target_control.is_closed_form())
    return composed;
  if (grid.empty())
    throw InvalidArgument("tabulated transport needs an evaluation grid");
  return composed.tabulate(grid);
}

struct ControlRow {
  Rational scale;
  long double bound = 0;  // D(s)
  Rational measured;      // component_diameter_bound at s
  bool pass = false;
  std::size_t class_index = 0;
};

// Per scale s: passes iff the provided cover's s-components are D(s)-bounded.
// cover_provider(s) must return an (n+1)-class cover of the whole space.
template <ExactMetricSpace S, class CoverProvider>
std::vector<ControlRow> verify_control_function(const S& space, const ControlFunction& control,
                                                std::size_t n, CoverProvider&& cover_provider,
                                                const std::vector<Rational>& scales) {
  std::vector<ControlRow> rows;
  for (const auto& s : scales) {
    const Cover cover = cover_provider(s);
    if (cover.classes.size() > n + 1)
      throw InvalidArgument("cover at scale " + s.str() + " has " +
                            std::to_string(cover.classes.size()) + " classes, expected at most " +
                            std::to_string(n + 1));
    const ComponentBound bound = component_diameter_bound(space, cover, s);
    ControlRow row;
    row.scale = s;
    row.bound = control(s.to_long_double());
    row.measured = bound.diameter;
    row.class_index = bound.class_index;
    if (auto exact = control.exact(s)) {
      row.pass = bound.diameter <= *exact;
    } else {
      row.pass = bound.diameter.to_long_double() <= row.bound;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace coarsedim
