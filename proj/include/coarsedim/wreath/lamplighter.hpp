#pragma once

#include <cstdint>
#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coarsedim/core/errors.hpp"
#include "coarsedim/group/table.hpp"
#include "coarsedim/group/word_norm.hpp"
#include "coarsedim/wreath/free_group.hpp"

namespace coarsedim {

// Finitely supported lamp configuration over F_2 plus a cursor. Lamp values
// are never the identity of H.
struct LamplighterElement {
  std::map<FreeGroupElement, GroupElement> lamps;
  FreeGroupElement cursor;

  bool in_kernel() const noexcept { return cursor.is_identity(); }

  // Canonical text key: cursor, then "pos:value" per lamp in order.
  std::string key() const {
    std::string k = cursor.word();
    k.push_back('|');
    for (const auto& [p, v] : lamps) {
      k += p.word();
      k.push_back(':');
      k += std::to_string(v);
      k.push_back(';');
    }
    return k;
  }

  bool operator==(const LamplighterElement&) const = default;
};

// H wr F_2 generated by a^+-1, b^+-1 and the H generators acting on the lamp
// at the cursor, all with unit weight.
class Lamplighter {
 public:
  explicit Lamplighter(FiniteGroupTable H = FiniteGroupTable::cyclic(2), std::vector<GroupElement> h_gens = {1})
      : H_(std::move(H)), h_gens_(std::move(h_gens)),
        h_norm_(word_norm_table(H_, WeightedGeneratingSet::uniform(H_, h_gens_))) {
    if (!h_norm_.all_reachable()) throw InvalidArgument("lamp generators do not generate H");
    for (GroupElement h : h_gens_)
      for (GroupElement x : {h, H_.inv(h)})
        if (x != 0 && std::find(lamp_gens_.begin(), lamp_gens_.end(), x) == lamp_gens_.end()) lamp_gens_.push_back(x);
    std::sort(lamp_gens_.begin(), lamp_gens_.end());
  }

  const FiniteGroupTable& lamp_group() const noexcept { return H_; }
  const NormTable& lamp_norm() const noexcept { return h_norm_; }

  LamplighterElement multiply(const LamplighterElement& x, const LamplighterElement& y) const {
    LamplighterElement out = x;
    for (const auto& [p, v] : y.lamps) set_lamp(out, x.cursor * p, v);
    out.cursor = x.cursor * y.cursor;
    return out;
  }

  LamplighterElement inverse(const LamplighterElement& x) const {
    LamplighterElement out;
    out.cursor = x.cursor.inverse();
    for (const auto& [p, v] : x.lamps) out.lamps[out.cursor * p] = H_.inv(v);
    return out;
  }

  // Right multiplication by each generator, in a fixed order.
  std::vector<LamplighterElement> generators() const {
    std::vector<LamplighterElement> out;
    for (char c : FreeGroupElement::kLetters) {
      LamplighterElement g;
      g.cursor = FreeGroupElement(std::string(1, c));
      out.push_back(g);
    }
    for (GroupElement h : lamp_gens_) {
      LamplighterElement g;
      g.lamps[FreeGroupElement()] = h;
      out.push_back(g);
    }
    return out;
  }

  // Steiner tree T of {e, cursor} u support in the Cayley tree: its edges are
  // the distinct nonempty prefixes. Length = 2|T| - |cursor| + sum ||lamp||_H.
  std::int64_t word_length(const LamplighterElement& x) const {
    std::vector<std::string> prefixes;
    auto add = [&](const std::string& w) {
      for (std::size_t l = 1; l <= w.size(); ++l) prefixes.push_back(w.substr(0, l));
    };
    add(x.cursor.word());
    std::int64_t lamp_cost = 0;
    for (const auto& [p, v] : x.lamps) {
      add(p.word());
      lamp_cost += h_norm_.at(v).floor();
    }
    std::sort(prefixes.begin(), prefixes.end());
    const auto edges = static_cast<std::int64_t>(std::unique(prefixes.begin(), prefixes.end()) - prefixes.begin());
    return 2 * edges - static_cast<std::int64_t>(x.cursor.length()) + lamp_cost;
  }

  std::int64_t distance(const LamplighterElement& x, const LamplighterElement& y) const {
    return word_length(multiply(inverse(x), y));
  }

 private:
  void set_lamp(LamplighterElement& e, const FreeGroupElement& pos, GroupElement v) const {
    auto it = e.lamps.find(pos);
    const GroupElement cur = it == e.lamps.end() ? 0 : it->second;
    const GroupElement nv = H_.mul(cur, v);
    if (nv == 0) {
      if (it != e.lamps.end()) e.lamps.erase(it);
    } else {
      e.lamps[pos] = nv;
    }
  }

  FiniteGroupTable H_;
  std::vector<GroupElement> h_gens_;
  NormTable h_norm_;
  std::vector<GroupElement> lamp_gens_;
};

// Ball of radius R by breadth-first search on the Cayley graph. Elements are
// in BFS order; depth[i] is the graph distance from the identity. Stops with
// complete = false once more than `budget` elements are discovered, keeping
// only the fully explored layers.
struct LamplighterBall {
  std::vector<LamplighterElement> elements;
  std::vector<std::int64_t> depth;
  std::unordered_map<std::string, std::size_t> index;
  std::int64_t radius = 0;  // largest fully enumerated radius
  bool complete = true;
};

inline LamplighterBall lamplighter_ball(const Lamplighter& L, std::int64_t R, std::size_t budget = 5000000) {
  LamplighterBall ball;
  ball.elements.push_back(LamplighterElement{});
  ball.depth.push_back(0);
  ball.index.emplace(ball.elements[0].key(), 0);
  const auto gens = L.generators();
  std::size_t layer_begin = 0;
  for (std::int64_t d = 0; d < R; ++d) {
    const std::size_t layer_end = ball.elements.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i)
      for (const auto& g : gens) {
        LamplighterElement y = L.multiply(ball.elements[i], g);
        std::string k = y.key();
        if (ball.index.count(k)) continue;
        ball.index.emplace(std::move(k), ball.elements.size());
        ball.elements.push_back(std::move(y));
        ball.depth.push_back(d + 1);
      }
    if (ball.elements.size() > budget) {
      // Layer d + 1 overflows the budget; drop it.
      for (std::size_t i = layer_end; i < ball.elements.size(); ++i) ball.index.erase(ball.elements[i].key());
      ball.elements.resize(layer_end);
      ball.depth.resize(layer_end);
      ball.complete = false;
      ball.radius = d;
      return ball;
    }
    layer_begin = layer_end;
  }
  ball.radius = R;
  return ball;
}

// All pairwise distances of a ball, via d(x, y) = ||x^-1 y||: the walk from
// the cursor c of x to the cursor c' of y visiting every v where the lamps
// differ, plus sum ||f(v)^-1 g(v)||_H. In a tree the Steiner tree of points
// listed in DFS order has half the cyclic sum of consecutive distances as
// its edge count; lexicographic order of reduced words is such an order.
// set(i, j, d) is called once per pair i < j.
template <class Set>
void for_each_ball_distance(const Lamplighter& L, const LamplighterBall& ball, Set&& set) {
  std::vector<std::string> verts;
  auto collect = [&](const FreeGroupElement& w) { verts.push_back(w.word()); };
  for (const auto& e : ball.elements) {
    collect(e.cursor);
    for (const auto& [p, v] : e.lamps) collect(p);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  const std::size_t V = verts.size();
  auto vid = [&](const FreeGroupElement& w) {
    return static_cast<std::uint32_t>(std::lower_bound(verts.begin(), verts.end(), w.word()) - verts.begin());
  };
  auto tree_dist = [&](std::uint32_t a, std::uint32_t b) {
    const auto& u = verts[a];
    const auto& w = verts[b];
    std::size_t l = 0;
    while (l < u.size() && l < w.size() && u[l] == w[l]) ++l;
    return static_cast<std::int64_t>(u.size() + w.size() - 2 * l);
  };
  std::vector<std::uint8_t> dist_cache;
  const bool cached = V * V <= (std::size_t{1} << 24);
  if (cached) {
    dist_cache.resize(V * V);
    for (std::uint32_t a = 0; a < V; ++a)
      for (std::uint32_t b = 0; b < V; ++b) dist_cache[a * V + b] = static_cast<std::uint8_t>(tree_dist(a, b));
  }
  auto td = [&](std::uint32_t a, std::uint32_t b) -> std::int64_t {
    return cached ? dist_cache[a * V + b] : tree_dist(a, b);
  };

  struct Compact {
    std::uint32_t cursor;
    std::vector<std::pair<std::uint32_t, GroupElement>> lamps;  // ascending vid
  };
  std::vector<Compact> cs;
  cs.reserve(ball.elements.size());
  for (const auto& e : ball.elements) {
    Compact c{vid(e.cursor), {}};
    for (const auto& [p, v] : e.lamps) c.lamps.emplace_back(vid(p), v);
    std::sort(c.lamps.begin(), c.lamps.end());
    cs.push_back(std::move(c));
  }
  const auto& H = L.lamp_group();
  const auto& hn = L.lamp_norm();
  std::vector<std::int64_t> hcost(H.order());
  for (GroupElement h = 0; h < H.order(); ++h) hcost[h] = hn.at(h).floor();

  std::vector<std::uint32_t> pts;
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      const auto& x = cs[i];
      const auto& y = cs[j];
      pts.clear();
      std::int64_t lamp = 0;
      std::size_t a = 0, b = 0;
      while (a < x.lamps.size() || b < y.lamps.size()) {
        if (b == y.lamps.size() || (a < x.lamps.size() && x.lamps[a].first < y.lamps[b].first)) {
          pts.push_back(x.lamps[a].first);
          lamp += hcost[H.inv(x.lamps[a].second)];
          ++a;
        } else if (a == x.lamps.size() || y.lamps[b].first < x.lamps[a].first) {
          pts.push_back(y.lamps[b].first);
          lamp += hcost[y.lamps[b].second];
          ++b;
        } else {
          const GroupElement h = H.mul(H.inv(x.lamps[a].second), y.lamps[b].second);
          if (h != 0) {
            pts.push_back(x.lamps[a].first);
            lamp += hcost[h];
          }
          ++a;
          ++b;
        }
      }
      pts.push_back(x.cursor);
      pts.push_back(y.cursor);
      std::sort(pts.begin(), pts.end());
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      std::int64_t cyc = 0;
      for (std::size_t t = 0; t < pts.size(); ++t) cyc += td(pts[t], pts[(t + 1) % pts.size()]);
      set(i, j, cyc - td(x.cursor, y.cursor) + lamp);
    }
}

}  // namespace coarsedim
