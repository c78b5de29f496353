#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coarsedim/core/errors.hpp"
#include "coarsedim/core/parallel.hpp"
#include "coarsedim/core/rational.hpp"
#include "coarsedim/group/table.hpp"
#include "coarsedim/group/word_norm.hpp"

namespace coarsedim {

// A finite group with a proper norm whose positive values are all >= 1.
class SummandSpec {
 public:
  SummandSpec(FiniteGroupTable group, NormTable norm) : group_(std::move(group)), norm_(std::move(norm)) {
    if (norm_.size() != group_.order()) throw InvalidArgument("summand norm does not match its group");
    if (!norm_.all_reachable()) throw InvalidArgument("summand norm does not reach every element");
    if (group_.order() > 1 && norm_.min_positive() < Rational(1))
      throw InvalidArgument("summand distances must be at least 1, found " + norm_.min_positive().str());
    diameter_ = norm_.diameter();
  }

  SummandSpec(const FiniteGroupTable& group, const WeightedGeneratingSet& gens)
      : SummandSpec(group, word_norm_table(group, gens)) {}

  // Z_k^n with unit weights on +-e_j: the l1 sum of cyclic word lengths.
  static SummandSpec cyclic_power(std::size_t k, std::size_t n) {
    FiniteGroupTable g = FiniteGroupTable::cyclic_power(k, n);
    std::vector<GroupElement> gens;
    std::size_t stride = 1;
    for (std::size_t j = 0; j < n; ++j, stride *= k) gens.push_back(static_cast<GroupElement>(stride));
    const auto w = WeightedGeneratingSet::uniform(g, gens);
    return SummandSpec(std::move(g), w);
  }

  const FiniteGroupTable& group() const noexcept { return group_; }
  const NormTable& norm() const noexcept { return norm_; }
  const Rational& diameter() const noexcept { return diameter_; }
  std::size_t order() const noexcept { return group_.order(); }

 private:
  FiniteGroupTable group_;
  NormTable norm_;
  Rational diameter_;
};

// s_1, s_2, ... with s_1 >= 1 and s_i >= s_{i-1} * diam(G_{i-1}) + 1.
class ScaleSequence {
 public:
  // Minimal sequence, equality in the recurrence; holds m+1 values so the
  // last window (s_m, s_{m+1}] exists.
  static ScaleSequence minimal(const std::vector<SummandSpec>& summands) {
    ScaleSequence out;
    Rational s(1);
    out.values_.push_back(s);
    for (const auto& sm : summands) {
      s = s * sm.diameter() + Rational(1);
      out.values_.push_back(s);
    }
    return out;
  }

  // Caller-supplied values, validated against the recurrence.
  static ScaleSequence checked(const std::vector<SummandSpec>& summands, std::vector<Rational> values) {
    ScaleSequence out = unchecked(std::move(values));
    if (out.values_.size() != summands.size() + 1)
      throw InvalidArgument("need " + std::to_string(summands.size() + 1) + " scale values, got " +
                            std::to_string(out.values_.size()));
    if (out.values_[0] < Rational(1)) throw InvalidArgument("s_1 must be at least 1");
    for (std::size_t i = 1; i < out.values_.size(); ++i)
      if (out.values_[i] < out.values_[i - 1] * summands[i - 1].diameter() + Rational(1))
        throw InvalidArgument("s_" + std::to_string(i + 1) + " = " + out.values_[i].str() +
                              " violates s_i >= s_{i-1} * diam + 1");
    return out;
  }

  // No recurrence check; for negative-control experiments.
  static ScaleSequence unchecked(std::vector<Rational> values) {
    ScaleSequence out;
    for (const auto& v : values)
      if (!v.is_positive()) throw InvalidArgument("scale values must be positive");
    out.values_ = std::move(values);
    return out;
  }

  // s_i, 1-based.
  const Rational& at(std::size_t i) const {
    if (i == 0 || i > values_.size()) throw InvalidArgument("scale index " + std::to_string(i) + " out of range");
    return values_[i - 1];
  }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<Rational>& values() const noexcept { return values_; }

 private:
  std::vector<Rational> values_;
};

// Finitely supported element: (index, value) pairs, index from 1, values
// never the identity, indices ascending.
class DirectSumElement {
 public:
  DirectSumElement() = default;
  explicit DirectSumElement(std::map<std::size_t, GroupElement> support) {
    for (const auto& [i, v] : support) {
      if (i == 0) throw InvalidArgument("summand indices start at 1");
      if (v != 0) support_.emplace_back(i, v);
    }
  }

  const std::vector<std::pair<std::size_t, GroupElement>>& support() const noexcept { return support_; }
  // k(g): largest supported index, 0 for the identity.
  std::size_t top() const noexcept { return support_.empty() ? 0 : support_.back().first; }
  GroupElement at(std::size_t i) const {
    for (const auto& [j, v] : support_)
      if (j == i) return v;
    return 0;
  }

 private:
  std::vector<std::pair<std::size_t, GroupElement>> support_;
};

// ||g|| = s_{k(g)} * ||pi_{k(g)}(g)||, 0 for the identity.
inline Rational quasi_norm(const std::vector<SummandSpec>& summands, const ScaleSequence& scales,
                           const DirectSumElement& g) {
  const std::size_t k = g.top();
  if (k == 0) return Rational(0);
  if (k > summands.size()) throw InvalidArgument("element supported beyond the given summands");
  const GroupElement v = g.at(k);
  if (v >= summands[k - 1].order()) throw InvalidArgument("coordinate outside its summand");
  return scales.at(k) * summands[k - 1].norm().at(v);
}

// The subgroup G_1 + ... + G_m with the restricted quasi-norm metric.
// Point ids are mixed radix with summand 1 least significant, so the
// elements with k(g) <= i are exactly the ids below stride(i + 1).
class TruncatedDirectSum {
 public:
  using distance_type = Rational;

  static constexpr std::size_t kMaxPoints = std::size_t{1} << 22;

  TruncatedDirectSum(std::vector<SummandSpec> summands, ScaleSequence scales)
      : summands_(std::move(summands)), scales_(std::move(scales)) {
    if (summands_.empty()) throw InvalidArgument("direct sum needs at least one summand");
    if (scales_.size() < summands_.size()) throw InvalidArgument("fewer scales than summands");
    stride_.push_back(1);
    for (const auto& s : summands_) {
      if (stride_.back() > kMaxPoints / s.order())
        throw ResourceError("truncated direct sum exceeds " + std::to_string(kMaxPoints) + " points");
      stride_.push_back(stride_.back() * s.order());
    }
    // scaled_[i][a * |G_i| + b] = s_i * d_{G_i}(a, b)
    for (std::size_t i = 0; i < summands_.size(); ++i) {
      const auto& g = summands_[i].group();
      const std::size_t q = g.order();
      std::vector<Rational> t(q * q);
      for (GroupElement a = 0; a < q; ++a)
        for (GroupElement b = 0; b < q; ++b) t[a * q + b] = scales_.at(i + 1) * summands_[i].norm().at(g.mul(g.inv(a), b));
      scaled_.push_back(std::move(t));
    }
  }

  static TruncatedDirectSum minimal(std::vector<SummandSpec> summands) {
    ScaleSequence s = ScaleSequence::minimal(summands);
    return TruncatedDirectSum(std::move(summands), std::move(s));
  }

  std::size_t size() const noexcept { return stride_.back(); }
  std::size_t summand_count() const noexcept { return summands_.size(); }
  const std::vector<SummandSpec>& summands() const noexcept { return summands_; }
  const SummandSpec& summand(std::size_t i) const { return summands_.at(i - 1); }
  const ScaleSequence& scales() const noexcept { return scales_; }
  // Ids with k(g) < i are exactly [0, stride(i)).
  std::size_t stride(std::size_t i) const { return stride_.at(i - 1); }

  // pi_i of point p, i from 1.
  GroupElement coord(std::size_t p, std::size_t i) const noexcept {
    return static_cast<GroupElement>((p / stride_[i - 1]) % summands_[i - 1].order());
  }

  std::size_t with_coord(std::size_t p, std::size_t i, GroupElement v) const noexcept {
    return p - coord(p, i) * stride_[i - 1] + v * stride_[i - 1];
  }

  std::size_t top(std::size_t p) const noexcept {
    std::size_t k = 0;
    for (std::size_t i = 1; i <= summands_.size(); ++i)
      if (p >= stride_[i - 1]) k = i;
    return k;
  }

  std::size_t top_difference(std::size_t a, std::size_t b) const noexcept {
    for (std::size_t i = summands_.size(); i >= 1; --i)
      if (coord(a, i) != coord(b, i)) return i;
    return 0;
  }

  Rational distance(std::size_t a, std::size_t b) const {
    const std::size_t k = top_difference(a, b);
    if (k == 0) return Rational(0);
    const std::size_t q = summands_[k - 1].order();
    return scaled_[k - 1][coord(a, k) * q + coord(b, k)];
  }

  Rational norm(std::size_t p) const { return distance(0, p); }

  std::size_t multiply(std::size_t a, std::size_t b) const noexcept {
    std::size_t out = 0;
    for (std::size_t i = summands_.size(); i >= 1; --i)
      out = out * summands_[i - 1].order() + summands_[i - 1].group().mul(coord(a, i), coord(b, i));
    return out;
  }

  std::size_t inverse(std::size_t a) const noexcept {
    std::size_t out = 0;
    for (std::size_t i = summands_.size(); i >= 1; --i)
      out = out * summands_[i - 1].order() + summands_[i - 1].group().inv(coord(a, i));
    return out;
  }

  std::size_t from_element(const DirectSumElement& g) const {
    std::size_t p = 0;
    for (const auto& [i, v] : g.support()) {
      if (i > summands_.size()) throw InvalidArgument("element supported beyond the truncation");
      if (v >= summands_[i - 1].order()) throw InvalidArgument("coordinate outside its summand");
      p += v * stride_[i - 1];
    }
    return p;
  }

  DirectSumElement to_element(std::size_t p) const {
    std::map<std::size_t, GroupElement> m;
    for (std::size_t i = 1; i <= summands_.size(); ++i) m[i] = coord(p, i);
    return DirectSumElement(m);
  }

  // Exact diameter of a point set. The distance of a pair depends only on
  // its top differing index K, and pairs with larger K are strictly farther,
  // so the diameter is s_K times the largest summand distance among the
  // K-coordinates, K the largest index where the set is not constant.
  Rational diameter(std::span<const std::size_t> pts) const {
    if (pts.size() < 2) return Rational(0);
    for (std::size_t k = summands_.size(); k >= 1; --k) {
      const std::size_t q = summands_[k - 1].order();
      std::vector<char> present(q, 0);
      std::size_t distinct = 0;
      for (std::size_t p : pts) {
        const GroupElement v = coord(p, k);
        if (!present[v]) {
          present[v] = 1;
          ++distinct;
        }
      }
      if (distinct < 2) continue;
      Rational best(0);
      for (GroupElement a = 0; a < q; ++a)
        if (present[a])
          for (GroupElement b = a + 1; b < q; ++b)
            if (present[b] && best < scaled_[k - 1][a * q + b]) best = scaled_[k - 1][a * q + b];
      return best;
    }
    return Rational(0);
  }

  // Ids h with ||h|| < s, ascending.
  std::vector<std::size_t> open_ball(const Rational& s) const {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < size(); ++p)
      if (norm(p) < s) out.push_back(p);
    return out;
  }

 private:
  std::vector<SummandSpec> summands_;
  ScaleSequence scales_;
  std::vector<std::size_t> stride_;
  std::vector<std::vector<Rational>> scaled_;
};

struct QuasiNormReport {
  bool pass = true;
  std::string axiom;          // first failing axiom, empty on pass
  std::string counterexample; // "g=..., h=..." for the first failure
  std::uint64_t pairs_checked = 0;
  bool pairs_sampled = false;
  std::uint64_t triangles_sampled = 0;
};

// Proper-norm axioms on the truncation: identity, positivity, symmetry under
// inversion, subadditivity over all pairs, and the properness count
// |{g : ||g|| < s_i}| <= |G_1| ... |G_{i-1}|. Optionally also samples the
// metric triangle inequality on random triples (fixed seed). sampled_pairs
// > 0 replaces the exhaustive subadditivity scan by that many random pairs.
inline QuasiNormReport verify_quasi_norm_axioms(const TruncatedDirectSum& ds, std::size_t budget,
                                                std::uint64_t sampled_triangles = 0, std::uint64_t seed = 1,
                                                std::uint64_t sampled_pairs = 0) {
  const std::size_t N = ds.size();
  if (N > budget)
    throw ResourceError("truncation has " + std::to_string(N) + " elements, budget " + std::to_string(budget));
  QuasiNormReport rep;
  auto fail = [&](const std::string& axiom, std::size_t g, std::size_t h) {
    rep.pass = false;
    rep.axiom = axiom;
    rep.counterexample = "g=" + std::to_string(g) + " h=" + std::to_string(h);
  };
  std::vector<Rational> norm(N);
  for (std::size_t g = 0; g < N; ++g) norm[g] = ds.norm(g);
  if (!norm[0].is_zero()) {
    fail("identity", 0, 0);
    return rep;
  }
  for (std::size_t g = 1; g < N; ++g) {
    if (!norm[g].is_positive()) {
      fail("positivity", g, g);
      return rep;
    }
    if (norm[ds.inverse(g)] != norm[g]) {
      fail("symmetry", g, ds.inverse(g));
      return rep;
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, N - 1);
  if (sampled_pairs > 0) {
    for (std::uint64_t t = 0; t < sampled_pairs; ++t) {
      const std::size_t g = pick(rng), h = pick(rng);
      if (norm[g] + norm[h] < norm[ds.multiply(g, h)]) {
        fail("subadditivity", g, h);
        return rep;
      }
    }
    rep.pairs_checked = sampled_pairs;
    rep.pairs_sampled = true;
  } else {
    const std::size_t workers = worker_count();
    std::vector<std::optional<std::pair<std::size_t, std::size_t>>> bad(workers);
    parallel_chunks(N, workers, [&](std::size_t w, std::size_t begin, std::size_t end) {
      for (std::size_t g = begin; g < end && !bad[w]; ++g)
        for (std::size_t h = 0; h < N; ++h)
          if (norm[g] + norm[h] < norm[ds.multiply(g, h)]) {
            bad[w] = std::make_pair(g, h);
            break;
          }
    });
    for (const auto& b : bad)
      if (b) {
        fail("subadditivity", b->first, b->second);
        return rep;
      }
    rep.pairs_checked = static_cast<std::uint64_t>(N) * N;
  }
  for (std::size_t i = 1; i <= ds.summand_count(); ++i) {
    std::size_t count = 0;
    for (std::size_t g = 0; g < N; ++g) count += norm[g] < ds.scales().at(i);
    if (count > ds.stride(i)) {
      fail("properness", i, count);
      return rep;
    }
  }
  for (std::uint64_t t = 0; t < sampled_triangles; ++t) {
    const std::size_t x = pick(rng), y = pick(rng), z = pick(rng);
    if (ds.distance(x, y) + ds.distance(y, z) < ds.distance(x, z)) {
      fail("triangle", x, z);
      rep.counterexample += " via=" + std::to_string(y);
      return rep;
    }
    ++rep.triangles_sampled;
  }
  return rep;
}

struct QuasiUltrametricReport {
  bool pass = true;
  std::uint64_t triples_checked = 0;
  std::uint64_t violations = 0;
  std::optional<std::array<std::size_t, 3>> first_violation;
};

namespace detail {

// d(a,b) <= max(d(b,c), d(a,c)) in all three rotations.
inline bool ultrametric_triple(const TruncatedDirectSum& ds, std::size_t a, std::size_t b, std::size_t c) {
  const Rational ab = ds.distance(a, b), bc = ds.distance(b, c), ac = ds.distance(a, c);
  return ab <= max(bc, ac) && bc <= max(ab, ac) && ac <= max(ab, bc);
}

}  // namespace detail

// Every unordered triple with pairwise distinct k-values, exhaustively.
inline QuasiUltrametricReport quasi_ultrametric_check(const TruncatedDirectSum& ds) {
  QuasiUltrametricReport rep;
  const std::size_t m = ds.summand_count();
  // Class k is the id range [lo(k), hi(k)).
  auto lo = [&](std::size_t k) { return k == 0 ? std::size_t{0} : ds.stride(k); };
  auto hi = [&](std::size_t k) { return k == 0 ? std::size_t{1} : (k < m ? ds.stride(k + 1) : ds.size()); };
  for (std::size_t k1 = 0; k1 <= m; ++k1)
    for (std::size_t k2 = k1 + 1; k2 <= m; ++k2)
      for (std::size_t k3 = k2 + 1; k3 <= m; ++k3) {
        const std::size_t n3 = hi(k3) - lo(k3);
        const std::size_t workers = worker_count();
        std::vector<QuasiUltrametricReport> part(workers);
        parallel_chunks(n3, workers, [&](std::size_t w, std::size_t begin, std::size_t end) {
          auto& r = part[w];
          for (std::size_t c = lo(k3) + begin; c < lo(k3) + end; ++c)
            for (std::size_t b = lo(k2); b < hi(k2); ++b)
              for (std::size_t a = lo(k1); a < hi(k1); ++a) {
                ++r.triples_checked;
                if (!detail::ultrametric_triple(ds, a, b, c)) {
                  ++r.violations;
                  if (!r.first_violation) r.first_violation = std::array<std::size_t, 3>{a, b, c};
                }
              }
        });
        for (const auto& r : part) {
          rep.triples_checked += r.triples_checked;
          rep.violations += r.violations;
          if (!rep.first_violation && r.first_violation) rep.first_violation = r.first_violation;
        }
      }
  rep.pass = rep.violations == 0;
  return rep;
}

// `samples` random triples with pairwise distinct k-values: three distinct
// classes uniformly, then a uniform element of each.
inline QuasiUltrametricReport quasi_ultrametric_check_sampled(const TruncatedDirectSum& ds, std::uint64_t samples,
                                                              std::uint64_t seed = 1) {
  QuasiUltrametricReport rep;
  const std::size_t m = ds.summand_count();
  if (m < 2) return rep;
  auto lo = [&](std::size_t k) { return k == 0 ? std::size_t{0} : ds.stride(k); };
  auto hi = [&](std::size_t k) { return k == 0 ? std::size_t{1} : (k < m ? ds.stride(k + 1) : ds.size()); };
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_class(0, m);
  for (std::uint64_t t = 0; t < samples; ++t) {
    std::size_t k[3];
    k[0] = pick_class(rng);
    do k[1] = pick_class(rng);
    while (k[1] == k[0]);
    do k[2] = pick_class(rng);
    while (k[2] == k[0] || k[2] == k[1]);
    std::size_t p[3];
    for (int j = 0; j < 3; ++j) p[j] = std::uniform_int_distribution<std::size_t>(lo(k[j]), hi(k[j]) - 1)(rng);
    ++rep.triples_checked;
    if (!detail::ultrametric_triple(ds, p[0], p[1], p[2])) {
      ++rep.violations;
      if (!rep.first_violation) rep.first_violation = std::array<std::size_t, 3>{p[0], p[1], p[2]};
    }
  }
  rep.pass = rep.violations == 0;
  return rep;
}

struct DirectSumSpecFile {
  std::vector<SummandSpec> summands;
  std::map<std::size_t, Rational> scale_overrides;  // 1-based index

  // Overridden values as given; every other s_i is minimal given s_{i-1}.
  // The result is validated.
  ScaleSequence scales() const {
    const std::size_t count = summands.size() + 1;
    for (const auto& [i, s] : scale_overrides)
      if (i == 0 || i > count) throw InvalidArgument("scale override index " + std::to_string(i) + " out of range");
    std::vector<Rational> v;
    for (std::size_t i = 1; i <= count; ++i) {
      const auto it = scale_overrides.find(i);
      if (it != scale_overrides.end()) v.push_back(it->second);
      else v.push_back(i == 1 ? Rational(1) : v.back() * summands[i - 2].diameter() + Rational(1));
    }
    return ScaleSequence::checked(summands, v);
  }
};

// Lines:
//   summand <group-file> [weights-file]   (word norm; unit weights on every
//                                           nonidentity element if no file)
//   summand cyclic_power <k> <n>           (built-in Z_k^n, unit weights)
//   scale <i> <num/den>
// Relative paths resolve against `base_dir`.
inline DirectSumSpecFile read_direct_sum_spec(std::istream& in, const std::filesystem::path& base_dir = {}) {
  DirectSumSpecFile out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    try {
      if (head == "summand") {
        std::string what;
        if (!(ls >> what)) throw ParseError(lineno, "summand needs a group file or 'cyclic_power k n'");
        if (what == "cyclic_power") {
          std::size_t k = 0, n = 0;
          if (!(ls >> k >> n) || k < 2 || n < 1) throw ParseError(lineno, "expected 'cyclic_power k n' with k >= 2, n >= 1");
          out.summands.push_back(SummandSpec::cyclic_power(k, n));
          continue;
        }
        const auto group_path = base_dir / what;
        std::ifstream gin(group_path);
        if (!gin) throw ParseError(lineno, "cannot open group file " + group_path.string());
        FiniteGroupTable g = read_group_table(gin);
        std::string weights_file;
        if (ls >> weights_file) {
          std::ifstream win(base_dir / weights_file);
          if (!win) throw ParseError(lineno, "cannot open weights file " + (base_dir / weights_file).string());
          const auto w = read_weights(win, g);
          out.summands.emplace_back(g, w);
        } else {
          std::vector<GroupElement> all;
          for (GroupElement x = 1; x < g.order(); ++x) all.push_back(x);
          const auto w = WeightedGeneratingSet::uniform(g, all);
          out.summands.emplace_back(g, w);
        }
      } else if (head == "scale") {
        std::size_t i = 0;
        std::string v;
        if (!(ls >> i >> v) || i == 0) throw ParseError(lineno, "expected 'scale i num/den'");
        out.scale_overrides[i] = Rational::parse(v);
      } else {
        throw ParseError(lineno, "unknown directive '" + head + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const ResourceError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(lineno, e.what());
    }
  }
  if (out.summands.empty()) throw ParseError(lineno, "spec declares no summands");
  return out;
}

}  // namespace coarsedim
