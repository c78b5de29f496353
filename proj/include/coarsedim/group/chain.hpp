#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "coarsedim/core/errors.hpp"
#include "coarsedim/core/rational.hpp"
#include "coarsedim/group/table.hpp"

namespace coarsedim {

// One-step ascending chain {1} = G_0 < G_1 < ... < G_m inside an ambient
// table, G_i = <g_1, ..., g_i> and g_i not in G_{i-1}.
class AscendingChain {
 public:
  AscendingChain(FiniteGroupTable ambient, std::vector<GroupElement> generators)
      : ambient_(std::move(ambient)), generators_(std::move(generators)) {
    subgroups_.push_back({0});
    std::vector<GroupElement> gens;
    for (std::size_t i = 0; i < generators_.size(); ++i) {
      const GroupElement g = generators_[i];
      if (g >= ambient_.order()) throw InvalidArgument("chain generator outside the ambient group");
      if (std::binary_search(subgroups_.back().begin(), subgroups_.back().end(), g))
        throw InvalidArgument("G_" + std::to_string(i) + " = G_" + std::to_string(i + 1) +
                              ": generator " + std::to_string(i + 1) + " adds nothing");
      gens.push_back(g);
      subgroups_.push_back(ambient_.closure(gens));
    }
  }

  // From explicit tables G_1..G_m, embeddings G_{i-1} -> G_i (m-1 maps) and
  // g_i in G_i. Each embedding must be an injective homomorphism and G_i must
  // be generated by the image of G_{i-1} and g_i. The ambient is G_m.
  static AscendingChain from_tables(const std::vector<FiniteGroupTable>& groups,
                                    const std::vector<std::vector<GroupElement>>& embeddings,
                                    const std::vector<GroupElement>& new_generators) {
    const std::size_t m = groups.size();
    if (m == 0) throw InvalidArgument("chain needs at least one group");
    if (embeddings.size() + 1 != m || new_generators.size() != m)
      throw InvalidArgument("chain needs m-1 embeddings and m generators");
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const auto& e = embeddings[i];
      const auto& A = groups[i];
      const auto& B = groups[i + 1];
      if (e.size() != A.order()) throw InvalidArgument("embedding " + std::to_string(i + 1) + " has wrong domain size");
      std::vector<char> hit(B.order(), 0);
      for (GroupElement x = 0; x < A.order(); ++x) {
        if (e[x] >= B.order()) throw InvalidArgument("embedding image outside target group");
        if (hit[e[x]]) throw InvalidArgument("embedding " + std::to_string(i + 1) + " is not injective");
        hit[e[x]] = 1;
        for (GroupElement y = 0; y < A.order(); ++y)
          if (e[A.mul(x, y)] != B.mul(e[x], e[y]))
            throw InvalidArgument("embedding " + std::to_string(i + 1) + " is not a homomorphism");
      }
    }
    // Push every generator forward into G_m.
    std::vector<GroupElement> pushed;
    for (std::size_t i = 0; i < m; ++i) {
      GroupElement g = new_generators[i];
      if (g >= groups[i].order()) throw InvalidArgument("generator outside its group");
      for (std::size_t j = i; j + 1 < m; ++j) g = embeddings[j][g];
      pushed.push_back(g);
    }
    AscendingChain chain(groups.back(), pushed);
    for (std::size_t i = 0; i < m; ++i)
      if (chain.subgroup(i + 1).size() != groups[i].order())
        throw InvalidArgument("G_" + std::to_string(i + 1) + " is not generated by G_" + std::to_string(i) +
                              " and its new generator");
    return chain;
  }

  // (Z_2)^n with the coordinate vectors e_1..e_n.
  static AscendingChain elementary_abelian(std::size_t n) {
    FiniteGroupTable g = FiniteGroupTable::cyclic_power(2, n);
    std::vector<GroupElement> gens;
    for (std::size_t i = 0; i < n; ++i) gens.push_back(static_cast<GroupElement>(std::size_t{1} << (n - 1 - i)));
    return AscendingChain(std::move(g), std::move(gens));
  }

  const FiniteGroupTable& ambient() const noexcept { return ambient_; }
  std::size_t length() const noexcept { return generators_.size(); }
  const std::vector<GroupElement>& generators() const noexcept { return generators_; }
  GroupElement generator(std::size_t i) const { return generators_.at(i - 1); }

  // Sorted ambient ids of G_i, 0 <= i <= length().
  const std::vector<GroupElement>& subgroup(std::size_t i) const { return subgroups_.at(i); }

 private:
  FiniteGroupTable ambient_;
  std::vector<GroupElement> generators_;
  std::vector<std::vector<GroupElement>> subgroups_;
};

// Chain G_i = Z_{m_1} + ... + Z_{m_i} held componentwise, for lengths far past
// any table budget. Element coordinates are residues.
class CyclicProductChain {
 public:
  explicit CyclicProductChain(std::vector<std::size_t> moduli) : moduli_(std::move(moduli)) {
    for (std::size_t m : moduli_)
      if (m < 2) throw InvalidArgument("cyclic factor must have order at least 2");
  }

  static CyclicProductChain elementary_abelian(std::size_t n) {
    return CyclicProductChain(std::vector<std::size_t>(n, 2));
  }

  std::size_t length() const noexcept { return moduli_.size(); }
  const std::vector<std::size_t>& moduli() const noexcept { return moduli_; }

  // log2 of the order of G_i.
  long double log2_order(std::size_t i) const {
    long double acc = 0;
    for (std::size_t j = 0; j < i; ++j) acc += std::log2(static_cast<long double>(moduli_.at(j)));
    return acc;
  }

 private:
  std::vector<std::size_t> moduli_;
};

// Word length of residue x in Z_m with generators +-1.
inline std::size_t cyclic_length(std::size_t x, std::size_t m) { return std::min(x % m, m - x % m); }

struct CardinalityRow {
  std::size_t index = 0;
  long double log2_order = 0;
  bool pass = false;
};

// |G_i| >= 2^i for every i.
inline std::vector<CardinalityRow> chain_cardinality_check(const AscendingChain& chain) {
  std::vector<CardinalityRow> rows;
  for (std::size_t i = 1; i <= chain.length(); ++i) {
    const std::size_t order = chain.subgroup(i).size();
    rows.push_back({i, std::log2(static_cast<long double>(order)), i < 64 && order >= (std::size_t{1} << i)});
  }
  return rows;
}

inline std::vector<CardinalityRow> chain_cardinality_check(const CyclicProductChain& chain) {
  std::vector<CardinalityRow> rows;
  for (std::size_t i = 1; i <= chain.length(); ++i) {
    // Each factor has order >= 2, so the bound holds termwise.
    bool pass = true;
    for (std::size_t j = 0; j < i; ++j) pass = pass && chain.moduli()[j] >= 2;
    rows.push_back({i, chain.log2_order(i), pass});
  }
  return rows;
}

}  // namespace coarsedim
