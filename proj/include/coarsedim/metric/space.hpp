#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "coarsedim/core/errors.hpp"
#include "coarsedim/core/rational.hpp"

namespace coarsedim {

// Anything with a point count and a symmetric distance between point indices.
template <class S>
concept MetricSpace = requires(const S& s, std::size_t i, std::size_t j) {
  typename S::distance_type;
  { s.size() } -> std::convertible_to<std::size_t>;
  { s.distance(i, j) } -> std::convertible_to<typename S::distance_type>;
};

// Spaces whose distances convert to Rational without loss. Scale
// connectivity and cover certification run only on these.
template <class S>
concept ExactMetricSpace =
    MetricSpace<S> && std::convertible_to<typename S::distance_type, Rational>;

// Finite metric space with exact rational distances, stored as a packed upper
// triangle.
class FiniteMetricSpace {
 public:
  using distance_type = Rational;

  FiniteMetricSpace() = default;

  // Builds from a distance callback; dist(i, j) is queried for i < j only.
  template <class F>
  static FiniteMetricSpace from_function(std::size_t n, F&& dist) {
    FiniteMetricSpace space(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) space.set(i, j, Rational(dist(i, j)));
    return space;
  }

  std::size_t size() const noexcept { return n_; }

  Rational distance(std::size_t i, std::size_t j) const {
    if (i == j) return Rational(0);
    if (i > j) std::swap(i, j);
    return upper_[index(i, j)];
  }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  void set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != n_)
      throw InvalidArgument("label count does not match point count");
    labels_ = std::move(labels);
  }

 private:
  explicit FiniteMetricSpace(std::size_t n) : n_(n), upper_(n < 2 ? 0 : n * (n - 1) / 2) {}

  std::size_t index(std::size_t i, std::size_t j) const noexcept {
    // Row-major packed upper triangle without the diagonal.
    return i * n_ - i * (i + 1) / 2 + (j - i - 1);
  }
  void set(std::size_t i, std::size_t j, Rational d) { upper_[index(i, j)] = d; }

  std::size_t n_ = 0;
  std::vector<Rational> upper_;
  std::vector<std::string> labels_;

  friend FiniteMetricSpace read_metric_space(std::istream&);
};

// Full square table of small integral (or any trivially copyable) distances.
// Used where row access matters for speed.
template <class T>
class DenseMetric {
 public:
  using distance_type = T;

  DenseMetric() = default;
  explicit DenseMetric(std::size_t n) : n_(n), table_(n * n, T{}) {}

  std::size_t size() const noexcept { return n_; }
  T distance(std::size_t i, std::size_t j) const noexcept { return table_[i * n_ + j]; }
  const T* row(std::size_t i) const noexcept { return table_.data() + i * n_; }

  void set(std::size_t i, std::size_t j, T d) noexcept {
    table_[i * n_ + j] = d;
    table_[j * n_ + i] = d;
  }

 private:
  std::size_t n_ = 0;
  std::vector<T> table_;
};

// Distances supplied by a callable; nothing is stored.
template <class D, class F>
class OracleMetric {
 public:
  using distance_type = D;

  OracleMetric(std::size_t n, F dist) : n_(n), dist_(std::move(dist)) {}

  std::size_t size() const noexcept { return n_; }
  D distance(std::size_t i, std::size_t j) const { return i == j ? D{} : dist_(i, j); }

 private:
  std::size_t n_;
  F dist_;
};

template <class D, class F>
OracleMetric<D, F> make_oracle_metric(std::size_t n, F dist) {
  return OracleMetric<D, F>(n, std::move(dist));
}

// Subspace view: point i of the view is point ids[i] of the base.
template <MetricSpace Base>
class SubspaceView {
 public:
  using distance_type = typename Base::distance_type;

  SubspaceView(const Base& base, std::vector<std::size_t> ids) : base_(&base), ids_(std::move(ids)) {}

  std::size_t size() const noexcept { return ids_.size(); }
  distance_type distance(std::size_t i, std::size_t j) const {
    return base_->distance(ids_[i], ids_[j]);
  }
  const std::vector<std::size_t>& ids() const noexcept { return ids_; }

 private:
  const Base* base_;
  std::vector<std::size_t> ids_;
};

struct MetricViolation {
  std::string axiom;
  std::size_t x = 0, y = 0, z = 0;
  std::string detail;
};

// Exhaustive check of the metric axioms: zero exactly on the diagonal,
// symmetry, and the triangle inequality over all triples.
template <ExactMetricSpace S>
std::optional<MetricViolation> check_metric_axioms(const S& space) {
  const std::size_t n = space.size();
  for (std::size_t x = 0; x < n; ++x) {
    if (Rational(space.distance(x, x)) != Rational(0))
      return MetricViolation{"identity", x, x, x, "d(x,x) != 0"};
    for (std::size_t y = x + 1; y < n; ++y) {
      const Rational dxy = space.distance(x, y);
      if (!dxy.is_positive())
        return MetricViolation{"positivity", x, y, y, "d(x,y) = " + dxy.str()};
      if (Rational(space.distance(y, x)) != dxy)
        return MetricViolation{"symmetry", x, y, y, "d(x,y) != d(y,x)"};
    }
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const Rational dxy = space.distance(x, y);
      for (std::size_t z = 0; z < n; ++z) {
        const Rational via = Rational(space.distance(x, z)) + Rational(space.distance(z, y));
        if (dxy > via)
          return MetricViolation{"triangle", x, y, z, dxy.str() + " > " + via.str()};
      }
    }
  return std::nullopt;
}

// Text format: "points N" then N(N-1)/2 lines "i j num/den". Blank lines and
// '#' comments are ignored.
inline FiniteMetricSpace read_metric_space(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> n;
  FiniteMetricSpace space;
  std::vector<bool> seen;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (!n) {
      std::size_t value = 0;
      if (head != "points" || !(ls >> value)) throw ParseError(lineno, "expected 'points N'");
      n = value;
      space = FiniteMetricSpace(value);
      seen.assign(space.upper_.size(), false);
      continue;
    }
    std::size_t i = 0, j = 0;
    std::string d;
    try {
      i = std::stoul(head);
    } catch (...) {
      throw ParseError(lineno, "expected point index, got '" + head + "'");
    }
    if (!(ls >> j >> d)) throw ParseError(lineno, "expected 'i j num/den'");
    if (i >= *n || j >= *n || i == j) throw ParseError(lineno, "point index out of range");
    if (i > j) std::swap(i, j);
    Rational value;
    try {
      value = Rational::parse(d);
    } catch (const Error& e) {
      throw ParseError(lineno, e.what());
    }
    const std::size_t k = space.index(i, j);
    if (seen[k]) throw ParseError(lineno, "duplicate pair " + std::to_string(i) + " " + std::to_string(j));
    seen[k] = true;
    space.set(i, j, value);
    ++count;
  }
  if (!n) throw ParseError(lineno, "missing 'points N' header");
  if (count != seen.size())
    throw ParseError(lineno, "expected " + std::to_string(seen.size()) + " distance lines, got " +
                                 std::to_string(count));
  if (auto bad = check_metric_axioms(space))
    throw ParseError(lineno, bad->axiom + " violated at (" + std::to_string(bad->x) + "," +
                                 std::to_string(bad->y) + "," + std::to_string(bad->z) + "): " +
                                 bad->detail);
  return space;
}

template <ExactMetricSpace S>
void write_metric_space(std::ostream& out, const S& space) {
  out << "points " << space.size() << '\n';
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t j = i + 1; j < space.size(); ++j)
      out << i << ' ' << j << ' ' << Rational(space.distance(i, j)).str() << '\n';
}

// Materializes any exact space into the stored form.
template <ExactMetricSpace S>
FiniteMetricSpace materialize(const S& space) {
  return FiniteMetricSpace::from_function(space.size(), [&](std::size_t i, std::size_t j) {
    return Rational(space.distance(i, j));
  });
}

// Integer interval {lo, ..., hi} with |x - y|.
inline FiniteMetricSpace integer_interval(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw InvalidArgument("empty interval");
  return FiniteMetricSpace::from_function(static_cast<std::size_t>(hi - lo + 1),
                                          [](std::size_t i, std::size_t j) {
                                            return Rational(static_cast<std::int64_t>(j) -
                                                            static_cast<std::int64_t>(i));
                                          });
}

// Z_k with the word metric of the generators +-1. Point i is the residue i.
inline FiniteMetricSpace cyclic_word_metric(std::size_t k) {
  if (k == 0) throw InvalidArgument("Z_0 is not finite");
  return FiniteMetricSpace::from_function(k, [k](std::size_t i, std::size_t j) {
    const std::size_t diff = j > i ? j - i : i - j;
    return Rational(static_cast<std::int64_t>(std::min(diff, k - diff)));
  });
}

}  // namespace coarsedim
