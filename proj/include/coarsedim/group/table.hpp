#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "coarsedim/core/errors.hpp"

namespace coarsedim {

using GroupElement = std::uint32_t;

// Finite group by Cayley table. Element 0 is the identity.
//
// Products of cyclic groups use mixed radix with coordinate 0 most
// significant, so ids order lexicographically by coordinates.
class FiniteGroupTable {
 public:
  // Groups above this order are refused; the table is order^2 entries.
  static constexpr std::size_t kMaxOrder = 1u << 13;

  FiniteGroupTable() : FiniteGroupTable(1, {0}) {}

  // Validates identity, inverses and associativity (Light's test over a
  // generating set, so cost is order^2 * |generators|).
  FiniteGroupTable(std::size_t order, std::vector<GroupElement> mul) : order_(order), mul_(std::move(mul)) {
    if (order_ == 0) throw InvalidArgument("group order must be positive");
    if (order_ > kMaxOrder)
      throw ResourceError("group order " + std::to_string(order_) + " exceeds table budget " +
                          std::to_string(kMaxOrder));
    if (mul_.size() != order_ * order_) throw InvalidArgument("multiplication table has wrong size");
    for (GroupElement v : mul_)
      if (v >= order_) throw InvalidArgument("multiplication table entry out of range");
    validate();
  }

  std::size_t order() const noexcept { return order_; }
  GroupElement mul(GroupElement a, GroupElement b) const noexcept { return mul_[a * order_ + b]; }
  GroupElement inv(GroupElement a) const noexcept { return inv_[a]; }
  const std::vector<GroupElement>& table() const noexcept { return mul_; }
  const std::vector<std::size_t>& moduli() const noexcept { return moduli_; }

  // Subgroup generated by `gens`, sorted ascending.
  std::vector<GroupElement> closure(const std::vector<GroupElement>& gens) const {
    std::vector<char> in(order_, 0);
    std::vector<GroupElement> members{0}, frontier{0};
    in[0] = 1;
    while (!frontier.empty()) {
      std::vector<GroupElement> next;
      for (GroupElement x : frontier)
        for (GroupElement g : gens) {
          check(g);
          const GroupElement y = mul(x, g);
          if (!in[y]) {
            in[y] = 1;
            members.push_back(y);
            next.push_back(y);
          }
        }
      frontier = std::move(next);
    }
    std::sort(members.begin(), members.end());
    return members;
  }

  // Table of a subgroup given by its sorted member list, relabeled by rank.
  FiniteGroupTable subgroup(const std::vector<GroupElement>& members) const {
    if (members.empty() || members.front() != 0) throw InvalidArgument("subgroup must contain the identity");
    std::vector<std::int64_t> rank(order_, -1);
    for (std::size_t i = 0; i < members.size(); ++i) {
      check(members[i]);
      if (i && members[i] <= members[i - 1]) throw InvalidArgument("subgroup members must be sorted and distinct");
      rank[members[i]] = static_cast<std::int64_t>(i);
    }
    const std::size_t m = members.size();
    std::vector<GroupElement> mul(m * m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const std::int64_t r = rank[this->mul(members[i], members[j])];
        if (r < 0) throw InvalidArgument("subset is not closed under multiplication");
        mul[i * m + j] = static_cast<GroupElement>(r);
      }
    return FiniteGroupTable(m, std::move(mul));
  }

  static FiniteGroupTable cyclic(std::size_t k) {
    if (k == 0) throw InvalidArgument("cyclic group order must be positive");
    return product_of_cyclic({k});
  }

  // Z_{m_0} x ... x Z_{m_{r-1}}, coordinate 0 most significant.
  static FiniteGroupTable product_of_cyclic(const std::vector<std::size_t>& moduli) {
    std::size_t order = 1;
    for (std::size_t m : moduli) {
      if (m == 0) throw InvalidArgument("cyclic factor order must be positive");
      if (order > kMaxOrder / m) throw ResourceError("product group exceeds table budget");
      order *= m;
    }
    std::vector<GroupElement> mul(order * order);
    std::vector<std::size_t> a(moduli.size()), b(moduli.size());
    for (std::size_t x = 0; x < order; ++x) {
      decode(moduli, x, a);
      for (std::size_t y = 0; y < order; ++y) {
        decode(moduli, y, b);
        std::size_t z = 0;
        for (std::size_t i = 0; i < moduli.size(); ++i) z = z * moduli[i] + (a[i] + b[i]) % moduli[i];
        mul[x * order + y] = static_cast<GroupElement>(z);
      }
    }
    FiniteGroupTable g(order, std::move(mul));
    g.moduli_ = moduli;
    return g;
  }

  // Z_k^n.
  static FiniteGroupTable cyclic_power(std::size_t k, std::size_t n) {
    return product_of_cyclic(std::vector<std::size_t>(n, k));
  }

  // Direct product A x B; element (a, b) has id a*|B| + b.
  static FiniteGroupTable direct_product(const FiniteGroupTable& A, const FiniteGroupTable& B) {
    const std::size_t p = A.order(), q = B.order();
    if (p * q > kMaxOrder) throw ResourceError("product group exceeds table budget");
    std::vector<GroupElement> mul(p * q * p * q);
    for (std::size_t x = 0; x < p * q; ++x)
      for (std::size_t y = 0; y < p * q; ++y)
        mul[x * p * q + y] = static_cast<GroupElement>(
            A.mul(static_cast<GroupElement>(x / q), static_cast<GroupElement>(y / q)) * q +
            B.mul(static_cast<GroupElement>(x % q), static_cast<GroupElement>(y % q)));
    FiniteGroupTable g(p * q, std::move(mul));
    if (!A.moduli_.empty() && !B.moduli_.empty()) {
      g.moduli_ = A.moduli_;
      g.moduli_.insert(g.moduli_.end(), B.moduli_.begin(), B.moduli_.end());
    }
    return g;
  }

  static void decode(const std::vector<std::size_t>& moduli, std::size_t x, std::vector<std::size_t>& out) {
    out.resize(moduli.size());
    for (std::size_t i = moduli.size(); i-- > 0;) {
      out[i] = x % moduli[i];
      x /= moduli[i];
    }
  }

  static std::size_t encode(const std::vector<std::size_t>& moduli, const std::vector<std::size_t>& coords) {
    std::size_t x = 0;
    for (std::size_t i = 0; i < moduli.size(); ++i) x = x * moduli[i] + coords[i] % moduli[i];
    return x;
  }

 private:
  void check(GroupElement g) const {
    if (g >= order_) throw InvalidArgument("element " + std::to_string(g) + " outside group");
  }

  void validate() {
    for (GroupElement x = 0; x < order_; ++x)
      if (mul(0, x) != x || mul(x, 0) != x)
        throw InvalidArgument("element 0 is not a two-sided identity");
    inv_.assign(order_, 0);
    for (GroupElement x = 0; x < order_; ++x) {
      std::optional<GroupElement> found;
      for (GroupElement y = 0; y < order_ && !found; ++y)
        if (mul(x, y) == 0) found = y;
      if (!found || mul(*found, x) != 0)
        throw InvalidArgument("element " + std::to_string(x) + " has no two-sided inverse");
      inv_[x] = *found;
    }
    // Light's test: the set of g with (xy)g = x(yg) for all x, y is closed
    // under products, so checking a generating set suffices.
    std::vector<GroupElement> gens;
    std::vector<char> reached(order_, 0);
    reached[0] = 1;
    std::size_t count = 1;
    for (GroupElement cand = 1; cand < order_ && count < order_; ++cand) {
      if (reached[cand]) continue;
      gens.push_back(cand);
      // Rebuild the set of all products of gens (as a set, no associativity
      // assumed beyond left-to-right evaluation).
      std::vector<GroupElement> frontier;
      std::fill(reached.begin(), reached.end(), 0);
      reached[0] = 1;
      frontier.push_back(0);
      count = 1;
      while (!frontier.empty()) {
        std::vector<GroupElement> next;
        for (GroupElement x : frontier)
          for (GroupElement g : gens) {
            const GroupElement y = mul(x, g);
            if (!reached[y]) {
              reached[y] = 1;
              ++count;
              next.push_back(y);
            }
          }
        frontier = std::move(next);
      }
    }
    for (GroupElement g : gens)
      for (GroupElement x = 0; x < order_; ++x)
        for (GroupElement y = 0; y < order_; ++y)
          if (mul(mul(x, y), g) != mul(x, mul(y, g)))
            throw InvalidArgument("multiplication is not associative at (" + std::to_string(x) + "," +
                                  std::to_string(y) + "," + std::to_string(g) + ")");
  }

  std::size_t order_ = 1;
  std::vector<GroupElement> mul_;
  std::vector<GroupElement> inv_;
  std::vector<std::size_t> moduli_;  // set by the cyclic-product factories
};

// Text format: "order m" then m lines holding row x of the table
// (x*0 ... x*(m-1)). '#' starts a comment.
inline FiniteGroupTable read_group_table(std::istream& in) {
  std::string line;
  std::size_t lineno = 0, order = 0, row = 0;
  bool have_order = false;
  std::vector<GroupElement> mul;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    if (!have_order) {
      std::string head;
      if (!(ls >> head)) continue;
      if (head != "order" || !(ls >> order) || order == 0) throw ParseError(lineno, "expected 'order m'");
      if (order > FiniteGroupTable::kMaxOrder) throw ResourceError("group order exceeds table budget");
      have_order = true;
      mul.reserve(order * order);
      continue;
    }
    std::vector<GroupElement> entries;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t pos = 0;
        const unsigned long v = std::stoul(tok, &pos);
        if (pos != tok.size() || v >= order) throw std::out_of_range("entry");
        entries.push_back(static_cast<GroupElement>(v));
      } catch (const std::exception&) {
        throw ParseError(lineno, "table entry '" + tok + "' is not an element id below " + std::to_string(order));
      }
    }
    if (entries.empty()) continue;
    if (entries.size() != order)
      throw ParseError(lineno, "row has " + std::to_string(entries.size()) + " entries, expected " +
                                   std::to_string(order));
    if (row == order) throw ParseError(lineno, "more than " + std::to_string(order) + " rows");
    mul.insert(mul.end(), entries.begin(), entries.end());
    ++row;
  }
  if (!have_order) throw ParseError(lineno, "missing 'order m' header");
  if (row != order) throw ParseError(lineno, "expected " + std::to_string(order) + " rows, got " + std::to_string(row));
  try {
    return FiniteGroupTable(order, std::move(mul));
  } catch (const InvalidArgument& e) {
    throw ParseError(lineno, e.what());
  }
}

inline void write_group_table(std::ostream& out, const FiniteGroupTable& g) {
  out << "order " << g.order() << '\n';
  for (GroupElement x = 0; x < g.order(); ++x) {
    for (GroupElement y = 0; y < g.order(); ++y) out << (y ? " " : "") << g.mul(x, y);
    out << '\n';
  }
}

}  // namespace coarsedim
