#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coarsedim/core/errors.hpp"
#include "coarsedim/core/rational.hpp"

namespace coarsedim::cli {

// Experiment kinds and the subcommand that selects each.
inline const std::map<std::string, std::string>& subcommand_kinds() {
  static const std::map<std::string, std::string> m{
      {"norm", "norm-axioms"},       {"components", "quasi-ultrametric"}, {"cover", "cover-certify"},
      {"cube", "cube-search"},       {"adversarial", "adversarial"},      {"defect", "log-defect"},
      {"epsilon", "epsilon-check"},  {"wreath", "wreath-kernel"},         {"dimreport", "dimension-report"},
  };
  return m;
}

// Keys accepted per kind, beyond the common ones.
inline const std::map<std::string, std::set<std::string>>& kind_keys() {
  static const std::set<std::string> family{"moduli", "n", "spec"};
  static const std::set<std::string> space{"space", "radius", "metric_file", "base", "rescale"};
  auto join = [](std::set<std::string> a, const std::set<std::string>& b) {
    a.insert(b.begin(), b.end());
    return a;
  };
  static const std::map<std::string, std::set<std::string>> m{
      {"norm-axioms", join(family, {"samples", "seed", "pair_samples"})},
      {"quasi-ultrametric", join(family, {"samples", "seed"})},
      {"cover-certify", {"cover", "n", "k", "moduli", "window"}},
      {"cube-search", {"family", "moduli", "n", "lattice_dim", "lattice_side"}},
      {"adversarial", {"control", "chain", "length", "depth"}},
      {"log-defect", space},
      {"epsilon-check", join(space, {"epsilon", "k"})},
      {"wreath-kernel", {"radius", "growth_max", "oracle_radius", "growth_r"}},
      {"dimension-report", {"family", "moduli", "n", "lattice_dim", "lattice_side"}},
  };
  return m;
}

// Flat key = value configuration. Each stored value keeps its source line
// (0 for command-line overrides) for diagnostics.
class Config {
 public:
  struct Entry {
    std::string value;
    std::size_t line = 0;
  };

  static Config parse(std::istream& in) {
    Config c;
    std::string text;
    std::size_t lineno = 0;
    while (std::getline(in, text)) {
      ++lineno;
      if (const auto hash = text.find('#'); hash != std::string::npos) text.resize(hash);
      const std::string line = trim(text);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value', got '" + line + "'");
      const std::string key = trim(line.substr(0, eq));
      if (key.empty()) throw ParseError(lineno, "empty key");
      if (c.entries_.count(key)) throw ParseError(lineno, "duplicate key '" + key + "'");
      c.entries_[key] = {trim(line.substr(eq + 1)), lineno};
    }
    return c;
  }

  void set(const std::string& key, const std::string& value) { entries_[key] = {value, 0}; }
  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  const std::map<std::string, Entry>& entries() const noexcept { return entries_; }

  std::string str(const std::string& key) const { return entry(key).value; }
  std::string str(const std::string& key, const std::string& fallback) const {
    return has(key) ? str(key) : fallback;
  }

  std::uint64_t uint(const std::string& key) const {
    const auto& e = entry(key);
    try {
      std::size_t used = 0;
      if (!e.value.empty() && e.value[0] != '-') {
        const auto v = std::stoull(e.value, &used);
        if (used == e.value.size()) return v;
      }
    } catch (const std::exception&) {
    }
    throw ParseError(e.line, "field '" + key + "' must be a nonnegative integer, got '" + e.value + "'");
  }
  std::uint64_t uint(const std::string& key, std::uint64_t fallback) const { return has(key) ? uint(key) : fallback; }

  std::uint64_t positive(const std::string& key, std::uint64_t fallback) const {
    const auto v = uint(key, fallback);
    if (v == 0) throw ParseError(entry(key).line, "field '" + key + "' must be positive");
    return v;
  }

  Rational rational(const std::string& key) const {
    const auto& e = entry(key);
    try {
      return Rational::parse(e.value);
    } catch (const Error& err) {
      throw ParseError(e.line, "field '" + key + "': " + err.what());
    }
  }
  Rational rational(const std::string& key, const Rational& fallback) const {
    return has(key) ? rational(key) : fallback;
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& e = entry(key);
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    throw ParseError(e.line, "field '" + key + "' must be true or false");
  }

  std::vector<std::size_t> size_list(const std::string& key) const {
    std::vector<std::size_t> out;
    for (const auto& item : split(key)) {
      try {
        std::size_t used = 0;
        const auto v = std::stoull(item, &used);
        if (used == item.size() && item[0] != '-') {
          out.push_back(v);
          continue;
        }
      } catch (const std::exception&) {
      }
      throw ParseError(entry(key).line, "field '" + key + "': bad integer '" + item + "'");
    }
    return out;
  }

  std::vector<Rational> rational_list(const std::string& key) const {
    std::vector<Rational> out;
    for (const auto& item : split(key)) {
      try {
        out.push_back(Rational::parse(item));
      } catch (const Error& err) {
        throw ParseError(entry(key).line, "field '" + key + "': " + err.what());
      }
    }
    return out;
  }

  // The kind is fixed by the subcommand; a config-supplied kind must agree.
  // Unknown keys are rejected.
  void validate(const std::string& kind) const {
    if (has("kind") && str("kind") != kind)
      throw ParseError(entry("kind").line, "field 'kind' is '" + str("kind") + "' but the subcommand runs " + kind);
    const auto& allowed = kind_keys().at(kind);
    for (const auto& [key, e] : entries_) {
      if (key == "kind" || key == "budget" || key == "scales" || key == "seed") continue;
      if (!allowed.count(key)) throw ParseError(e.line, "field '" + key + "' is not used by " + kind);
    }
    if (has("budget")) positive("budget", 1);
  }

  std::size_t line(const std::string& key) const { return has(key) ? entry(key).line : 0; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const { throw ParseError(line(key), what); }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  }

  const Entry& entry(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ParseError(0, "missing required field '" + key + "'");
    return it->second;
  }

  std::vector<std::string> split(const std::string& key) const {
    std::vector<std::string> out;
    std::string cur;
    for (char c : str(key) + ",") {
      if (c == ',') {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    return out;
  }

  std::map<std::string, Entry> entries_;
};

}  // namespace coarsedim::cli
