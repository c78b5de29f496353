#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "coarsedim/core/errors.hpp"
#include "coarsedim/core/rational.hpp"
#include "coarsedim/group/chain.hpp"
#include "coarsedim/group/table.hpp"
#include "coarsedim/group/word_norm.hpp"
#include "coarsedim/metric/components.hpp"
#include "coarsedim/metric/control.hpp"
#include "coarsedim/metric/space.hpp"

namespace coarsedim {

// Scale offset used to test J-connectivity with strict chains: steps of
// length exactly J join at scale J + 1/1024.
inline Rational adversarial_epsilon() { return Rational(1, 1024); }

struct AdversarialRound {
  std::size_t round = 0;        // r, from 1
  Rational J;                   // J_r
  long double f_J = 0;          // f(J_r)
  std::size_t group_index = 0;  // i_r
  std::vector<std::size_t> witness;  // coordinates of h_r
  Rational witness_norm;
  Rational diameter;            // diam(G_{i_r}) under the constructed norm
  bool exceeds = false;         // ||h_r|| > f(J_r)
  bool connected = false;       // h_r in the identity's (J_r + eps)-component
  std::size_t verified_points = 0;

  bool pass() const noexcept { return exceeds && connected; }
};

struct AdversarialResult {
  std::vector<AdversarialRound> rounds;
  std::vector<Rational> generator_weights;  // weight of g_j, j = 1..i_last
  bool complete = false;
  std::string stop_reason;
};

inline std::string format_coords(const std::vector<std::size_t>& c) {
  std::string out = "(";
  for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + std::to_string(c[i]);
  return out + ")";
}

namespace detail {

inline void require_divergent(const ControlFunction& f) {
  if (!f.is_increasing_divergent())
    throw InvalidArgument("adversarial construction needs an increasing divergent f, got '" + f.str() + "'");
}

// ||h|| > f(J), exactly when f has an exact value at J.
inline bool exceeds(const ControlFunction& f, const Rational& J, const Rational& norm) {
  if (auto e = f.exact(J)) return *e < norm;
  return norm.to_long_double() > f(J.to_long_double());
}

}  // namespace detail

// The construction on a table chain. Stops early (complete = false) when
// the chain runs out before `depth` rounds.
inline AdversarialResult adversarial_rounds(const ControlFunction& f, const AscendingChain& chain, std::size_t depth) {
  detail::require_divergent(f);
  const FiniteGroupTable& G = chain.ambient();
  AdversarialResult out;
  std::size_t prev_index = 0;
  std::vector<GroupElement> prev_elems{0};
  std::vector<Rational> prev_norm{Rational(0)};
  Rational J(1);
  for (std::size_t r = 1; r <= depth; ++r) {
    std::optional<std::size_t> found_i;
    NormTable table;
    GroupElement witness = 0;
    for (std::size_t i = std::max<std::size_t>(prev_index, 1); i <= chain.length() && !found_i; ++i) {
      std::vector<GroupElement> new_gens;
      for (std::size_t j = prev_index + 1; j <= i; ++j) new_gens.push_back(chain.generator(j));
      NormTable t = extend_norm(G, prev_elems, prev_norm, new_gens, J, false);
      if (t.support() != chain.subgroup(i)) throw InternalError("extended norm does not live on G_i");
      for (GroupElement h : chain.subgroup(i))
        if (detail::exceeds(f, J, t.at(h))) {
          found_i = i;
          witness = h;
          table = std::move(t);
          break;
        }
    }
    if (!found_i) {
      out.stop_reason = "chain of length " + std::to_string(chain.length()) + " exhausted in round " +
                        std::to_string(r) + " (J = " + J.str() + ")";
      return out;
    }
    const std::size_t i = *found_i;
    for (std::size_t j = prev_index + 1; j <= i; ++j) out.generator_weights.push_back(J);

    AdversarialRound round;
    round.round = r;
    round.J = J;
    round.f_J = f(J.to_long_double());
    round.group_index = i;
    if (!G.moduli().empty()) {
      FiniteGroupTable::decode(G.moduli(), witness, round.witness);
    } else {
      round.witness = {witness};
    }
    round.witness_norm = table.at(witness);
    round.diameter = table.diameter();
    round.exceeds = detail::exceeds(f, J, round.witness_norm);

    const auto& members = chain.subgroup(i);
    const auto space = make_oracle_metric<Rational>(members.size(), [&](std::size_t a, std::size_t b) {
      return table.at(G.mul(G.inv(members[a]), members[b]));
    });
    const auto parts = scale_components(space, J + adversarial_epsilon());
    const std::size_t wpos = static_cast<std::size_t>(
        std::lower_bound(members.begin(), members.end(), witness) - members.begin());
    for (const auto& part : parts)
      if (std::binary_search(part.begin(), part.end(), std::size_t{0}))
        round.connected = std::binary_search(part.begin(), part.end(), wpos);
    round.verified_points = members.size();
    out.rounds.push_back(round);

    prev_index = i;
    prev_elems = members;
    prev_norm.clear();
    for (GroupElement x : members) prev_norm.push_back(table.at(x));
    J = round.diameter + Rational(1);
  }
  out.complete = true;
  return out;
}

// The construction on a componentwise chain. Generator g_j = e_j gets weight
// w_j on +-e_j, so ||x|| = sum_j w_j * cyc(x_j) and the lexicographically least
// witness is found greedily. Connectivity is verified on the explicit path
// that walks each coordinate to its target one unit step at a time.
inline AdversarialResult adversarial_rounds(const ControlFunction& f, const CyclicProductChain& chain,
                                            std::size_t depth) {
  detail::require_divergent(f);
  const auto& mod = chain.moduli();
  AdversarialResult out;
  std::vector<Rational> w;  // weights of g_1..g_prev
  Rational prev_diam(0);
  Rational J(1);
  auto half = [&](std::size_t j) { return Rational(static_cast<std::int64_t>(mod[j] / 2)); };
  for (std::size_t r = 1; r <= depth; ++r) {
    // Smallest i whose maximal norm exceeds f(J).
    std::optional<std::size_t> found_i;
    Rational max_norm = prev_diam;
    std::size_t i = w.size();
    if (i >= 1 && detail::exceeds(f, J, max_norm)) found_i = i;
    while (!found_i && i < chain.length()) {
      max_norm = max_norm + J * half(i);
      ++i;
      if (detail::exceeds(f, J, max_norm)) found_i = i;
    }
    if (!found_i) {
      out.stop_reason = "chain of length " + std::to_string(chain.length()) + " exhausted in round " +
                        std::to_string(r) + " (J = " + J.str() + ")";
      return out;
    }
    std::vector<Rational> weights = w;
    while (weights.size() < i) weights.push_back(J);

    // Greedy lexicographically least witness.
    std::vector<Rational> rest(i + 1, Rational(0));
    for (std::size_t j = i; j-- > 0;) rest[j] = rest[j + 1] + weights[j] * half(j);
    std::vector<std::size_t> h(i, 0);
    Rational partial(0);
    for (std::size_t j = 0; j < i; ++j) {
      for (std::size_t v = 0; v < mod[j]; ++v) {
        const Rational cand = partial + weights[j] * Rational(static_cast<std::int64_t>(cyclic_length(v, mod[j])));
        if (detail::exceeds(f, J, cand + rest[j + 1])) {
          h[j] = v;
          partial = cand;
          break;
        }
      }
    }

    AdversarialRound round;
    round.round = r;
    round.J = J;
    round.f_J = f(J.to_long_double());
    round.group_index = i;
    round.witness = h;
    round.witness_norm = partial;
    round.diameter = rest[0];
    round.exceeds = detail::exceeds(f, J, partial);

    // Unit-step path from the identity to h.
    std::vector<std::vector<std::size_t>> path{std::vector<std::size_t>(i, 0)};
    for (std::size_t j = 0; j < i; ++j) {
      const std::size_t steps = cyclic_length(h[j], mod[j]);
      const bool forward = h[j] <= mod[j] - h[j];
      for (std::size_t t = 0; t < steps; ++t) {
        auto next = path.back();
        next[j] = forward ? (next[j] + 1) % mod[j] : (next[j] + mod[j] - 1) % mod[j];
        path.push_back(std::move(next));
      }
    }
    const auto space = make_oracle_metric<Rational>(path.size(), [&](std::size_t a, std::size_t b) {
      Rational d(0);
      for (std::size_t j = 0; j < i; ++j) {
        const std::size_t diff = (path[b][j] + mod[j] - path[a][j]) % mod[j];
        d = d + weights[j] * Rational(static_cast<std::int64_t>(cyclic_length(diff, mod[j])));
      }
      return d;
    });
    if (path.back() != h) throw InternalError("witness path does not end at the witness");
    const auto parts = scale_components(space, J + adversarial_epsilon());
    for (const auto& part : parts)
      if (part.front() == 0) round.connected = std::binary_search(part.begin(), part.end(), path.size() - 1);
    round.verified_points = path.size();
    out.rounds.push_back(round);

    w = std::move(weights);
    prev_diam = round.diameter;
    J = prev_diam + Rational(1);
  }
  out.generator_weights = w;
  out.complete = true;
  return out;
}

// As adversarial_rounds, but an exhausted chain is an error.
template <class Chain>
AdversarialResult adversarial_metric(const ControlFunction& f, const Chain& chain, std::size_t depth) {
  AdversarialResult res = adversarial_rounds(f, chain, depth);
  if (!res.complete) throw InsufficientChain(res.rounds.size(), res.stop_reason);
  return res;
}

}  // namespace coarsedim
