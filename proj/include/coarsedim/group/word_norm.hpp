#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coarsedim/core/errors.hpp"
#include "coarsedim/core/rational.hpp"
#include "coarsedim/group/table.hpp"

namespace coarsedim {

// Symmetric weighted generating set: w(s) = w(s^-1) > 0, identity excluded.
class WeightedGeneratingSet {
 public:
  WeightedGeneratingSet() = default;

  // Weights given for a subset of generators are mirrored onto inverses; a
  // conflicting explicit inverse weight is an error.
  WeightedGeneratingSet(const FiniteGroupTable& group, const std::vector<std::pair<GroupElement, Rational>>& weights) {
    std::map<GroupElement, Rational> w;
    auto put = [&](GroupElement g, const Rational& value) {
      auto [it, inserted] = w.emplace(g, value);
      if (!inserted && it->second != value)
        throw InvalidArgument("weight of generator " + std::to_string(g) + " conflicts with its inverse");
    };
    for (const auto& [g, value] : weights) {
      if (g >= group.order()) throw InvalidArgument("generator " + std::to_string(g) + " outside group");
      if (g == 0) {
        if (!value.is_zero()) throw InvalidArgument("identity may only carry weight 0");
        continue;
      }
      if (!value.is_positive()) throw InvalidArgument("generator " + std::to_string(g) + " needs positive weight");
      put(g, value);
    }
    for (const auto& [g, value] : std::map<GroupElement, Rational>(w)) put(group.inv(g), value);
    gens_.assign(w.begin(), w.end());
  }

  // All of `gens` (and inverses) with the same weight.
  static WeightedGeneratingSet uniform(const FiniteGroupTable& group, const std::vector<GroupElement>& gens,
                                       const Rational& weight = Rational(1)) {
    std::vector<std::pair<GroupElement, Rational>> w;
    for (GroupElement g : gens) w.emplace_back(g, weight);
    return WeightedGeneratingSet(group, w);
  }

  const std::vector<std::pair<GroupElement, Rational>>& generators() const noexcept { return gens_; }

 private:
  std::vector<std::pair<GroupElement, Rational>> gens_;  // sorted by element, symmetric
};

// Weights file: lines "gen_id num/den"; '#' comments.
inline WeightedGeneratingSet read_weights(std::istream& in, const FiniteGroupTable& group) {
  std::vector<std::pair<GroupElement, Rational>> w;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string id, value;
    if (!(ls >> id)) continue;
    if (!(ls >> value)) throw ParseError(lineno, "expected 'gen_id num/den'");
    try {
      std::size_t pos = 0;
      const unsigned long g = std::stoul(id, &pos);
      if (pos != id.size()) throw InvalidArgument("bad generator id");
      w.emplace_back(static_cast<GroupElement>(g), Rational::parse(value));
    } catch (const std::exception& e) {
      throw ParseError(lineno, "bad weight line: " + std::string(e.what()));
    }
  }
  try {
    return WeightedGeneratingSet(group, w);
  } catch (const InvalidArgument& e) {
    throw ParseError(lineno, e.what());
  }
}

// Norm values indexed by element id. Elements outside the generated subgroup
// are unreachable.
class NormTable {
 public:
  NormTable() = default;
  NormTable(std::vector<Rational> value, std::vector<char> reachable)
      : value_(std::move(value)), reachable_(std::move(reachable)) {}

  std::size_t size() const noexcept { return value_.size(); }
  bool reachable(GroupElement g) const noexcept { return g < reachable_.size() && reachable_[g]; }
  const Rational& at(GroupElement g) const {
    if (!reachable(g)) throw NotGenerated(g);
    return value_[g];
  }
  const Rational& operator[](GroupElement g) const { return at(g); }

  // Reachable elements, ascending.
  std::vector<GroupElement> support() const {
    std::vector<GroupElement> out;
    for (std::size_t g = 0; g < value_.size(); ++g)
      if (reachable_[g]) out.push_back(static_cast<GroupElement>(g));
    return out;
  }

  // Maximum norm over reachable elements.
  Rational diameter() const {
    Rational best(0);
    for (std::size_t g = 0; g < value_.size(); ++g)
      if (reachable_[g] && best < value_[g]) best = value_[g];
    return best;
  }

  // Smallest positive norm value (0 for the trivial group).
  Rational min_positive() const {
    std::optional<Rational> best;
    for (std::size_t g = 1; g < value_.size(); ++g)
      if (reachable_[g] && (!best || value_[g] < *best)) best = value_[g];
    return best.value_or(Rational(0));
  }

  bool all_reachable() const {
    return std::all_of(reachable_.begin(), reachable_.end(), [](char c) { return c != 0; });
  }

 private:
  std::vector<Rational> value_;
  std::vector<char> reachable_;
};

// Single-source shortest paths from the identity in the right Cayley graph
// (edge x -> x*s of weight w(s)); one sweep yields every norm.
inline NormTable word_norm_table(const FiniteGroupTable& group, const WeightedGeneratingSet& gens) {
  const std::size_t m = group.order();
  std::vector<Rational> dist(m, Rational(0));
  std::vector<char> reached(m, 0), done(m, 0);
  using Item = std::pair<Rational, GroupElement>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  reached[0] = 1;
  pq.emplace(Rational(0), 0);
  while (!pq.empty()) {
    const auto [d, x] = pq.top();
    pq.pop();
    if (done[x]) continue;
    done[x] = 1;
    for (const auto& [s, w] : gens.generators()) {
      const GroupElement y = group.mul(x, s);
      const Rational nd = d + w;
      if (!reached[y] || nd < dist[y]) {
        reached[y] = 1;
        dist[y] = nd;
        pq.emplace(nd, y);
      }
    }
  }
  return NormTable(std::move(dist), std::move(reached));
}

inline Rational word_norm(const FiniteGroupTable& group, const WeightedGeneratingSet& gens, GroupElement g) {
  if (g >= group.order()) throw InvalidArgument("element " + std::to_string(g) + " outside group");
  return word_norm_table(group, gens).at(g);
}

struct NormViolation {
  std::string axiom;
  GroupElement g = 0, h = 0;
  std::string detail;
};

// Proper-norm axioms on the whole table: ||1|| = 0, ||g|| > 0 otherwise,
// ||g^-1|| = ||g||, ||gh|| <= ||g|| + ||h||. Finite balls are automatic.
inline std::optional<NormViolation> check_norm_axioms(const FiniteGroupTable& group, const NormTable& norm) {
  const std::size_t m = group.order();
  if (norm.size() != m) return NormViolation{"domain", 0, 0, "norm table size differs from group order"};
  for (GroupElement g = 0; g < m; ++g)
    if (!norm.reachable(g)) return NormViolation{"generation", g, g, "element not generated"};
  if (!norm.at(0).is_zero()) return NormViolation{"identity", 0, 0, "||1|| = " + norm.at(0).str()};
  for (GroupElement g = 1; g < m; ++g) {
    if (!norm.at(g).is_positive()) return NormViolation{"positivity", g, g, "||g|| = " + norm.at(g).str()};
    if (norm.at(group.inv(g)) != norm.at(g))
      return NormViolation{"symmetry", g, group.inv(g), norm.at(g).str() + " != " + norm.at(group.inv(g)).str()};
  }
  for (GroupElement g = 0; g < m; ++g)
    for (GroupElement h = 0; h < m; ++h) {
      const Rational lhs = norm.at(group.mul(g, h));
      const Rational rhs = norm.at(g) + norm.at(h);
      if (rhs < lhs) return NormViolation{"subadditivity", g, h, lhs.str() + " > " + rhs.str()};
    }
  return std::nullopt;
}

// Norm on G_next from the weight function that gives each element of G_prev
// its norm and each new generator (and inverse) the weight w. Requires
// w >= diam(G_prev), which forces the result to restrict to the input norm on
// G_prev; that restriction is re-verified exhaustively.
//
// `prev` lists the ids (in `next`) of G_prev, `prev_norm[i]` the norm of
// prev[i]. With require_generated, every element of `next` must be reached.
inline NormTable extend_norm(const FiniteGroupTable& next, const std::vector<GroupElement>& prev,
                             const std::vector<Rational>& prev_norm, const std::vector<GroupElement>& new_gens,
                             const Rational& weight, bool require_generated = true) {
  if (prev.size() != prev_norm.size()) throw InvalidArgument("previous norm does not match its subgroup");
  std::vector<char> in_prev(next.order(), 0);
  Rational diam(0);
  for (std::size_t i = 0; i < prev.size(); ++i) {
    if (prev[i] >= next.order()) throw InvalidArgument("previous subgroup element outside group");
    in_prev[prev[i]] = 1;
    if (diam < prev_norm[i]) diam = prev_norm[i];
  }
  if (weight < diam)
    throw PreconditionError("new generator weight " + weight.str() + " is below diam(G_prev) = " + diam.str());
  for (GroupElement s : new_gens) {
    if (s >= next.order()) throw InvalidArgument("generator outside group");
    if (in_prev[s]) throw InvalidArgument("new generator " + std::to_string(s) + " already lies in G_prev");
  }
  std::vector<std::pair<GroupElement, Rational>> w;
  for (std::size_t i = 0; i < prev.size(); ++i)
    if (prev[i] != 0) w.emplace_back(prev[i], prev_norm[i]);
  for (GroupElement s : new_gens) w.emplace_back(s, weight);
  const NormTable table = word_norm_table(next, WeightedGeneratingSet(next, w));
  if (require_generated)
    for (GroupElement g = 0; g < next.order(); ++g)
      if (!table.reachable(g)) throw NotGenerated(g);
  for (std::size_t i = 0; i < prev.size(); ++i)
    if (table.at(prev[i]) != prev_norm[i])
      throw InternalError("extended norm of element " + std::to_string(prev[i]) + " is " +
                          table.at(prev[i]).str() + ", expected " + prev_norm[i].str());
  return table;
}

}  // namespace coarsedim
