#pragma once

#include <cmath>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coarsedim/cli/config.hpp"
#include "coarsedim/cone/shadows.hpp"
#include "coarsedim/covers/lattice.hpp"
#include "coarsedim/covers/reflection.hpp"
#include "coarsedim/covers/report.hpp"
#include "coarsedim/direct_sum/direct_sum.hpp"
#include "coarsedim/direct_sum/pullback.hpp"
#include "coarsedim/group/adversarial.hpp"
#include "coarsedim/group/chain.hpp"
#include "coarsedim/metric/control.hpp"
#include "coarsedim/wreath/kernel.hpp"
#include "coarsedim/wreath/lamplighter.hpp"

namespace coarsedim::cli {

enum ExitCode : int { kPass = 0, kCertificationFailed = 1, kParseFailed = 2, kResourceExceeded = 3 };

// One CSV file. Rows are already formatted; a "verdict" column, when present,
// takes part in the overall verdict.
struct Table {
  std::string file;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> verdict_column() const {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (header[c] == "verdict") return c;
    return std::nullopt;
  }

  std::string csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t c = 0; c < cells.size(); ++c) out += (c ? "," : "") + cells[c];
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

struct Report {
  std::string kind;
  std::deque<Table> tables;
  nlohmann::json certified = nlohmann::json::object();
  nlohmann::json measured = nlohmann::json::object();
  bool partial = false;
  std::string error;

  Table& table(const std::string& file, std::vector<std::string> header) {
    tables.push_back(Table{file, std::move(header), {}});
    return tables.back();
  }

  std::size_t row_count() const {
    std::size_t n = 0;
    for (const auto& t : tables)
      if (t.verdict_column()) n += t.rows.size();
    return n;
  }

  std::size_t failed_rows() const {
    std::size_t n = 0;
    for (const auto& t : tables)
      if (const auto c = t.verdict_column())
        for (const auto& r : t.rows) n += r[*c] != "pass";
    return n;
  }

  int exit_code() const {
    if (partial) return kResourceExceeded;
    return failed_rows() == 0 ? kPass : kCertificationFailed;
  }

  nlohmann::json summary() const {
    nlohmann::json j;
    j["kind"] = kind;
    j["exit_status"] = exit_code();
    j["verdict"] = partial ? "partial" : (failed_rows() == 0 ? "pass" : "fail");
    j["rows"] = row_count();
    j["failed_rows"] = failed_rows();
    j["partial"] = partial;
    if (!error.empty()) j["error"] = error;
    j["certified"] = certified;
    j["measured"] = measured;
    nlohmann::json files = nlohmann::json::array();
    for (const auto& t : tables) files.push_back(t.file);
    j["files"] = files;
    return j;
  }
};

namespace detail {

inline std::string verdict(bool pass) { return pass ? "pass" : "fail"; }
inline std::string yes_no(bool b) { return b ? "true" : "false"; }

inline std::string real(long double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << static_cast<double>(v);
  return os.str();
}

inline TruncatedDirectSum family_sum(const Config& c, const std::filesystem::path& base_dir) {
  if (c.has("spec")) {
    const auto path = base_dir / c.str("spec");
    std::ifstream in(path);
    if (!in) c.fail("spec", "cannot open spec file " + path.string());
    const auto spec = read_direct_sum_spec(in, path.parent_path());
    return TruncatedDirectSum(spec.summands, spec.scales());
  }
  FamilyDescriptor f;
  f.moduli = c.size_list("moduli");
  f.n = c.uint("n", 2);
  return build_family(f);
}

inline FamilyDescriptor family_descriptor(const Config& c) {
  FamilyDescriptor f;
  f.kind = c.str("family", "direct-sum");
  if (f.kind != "direct-sum" && f.kind != "product") c.fail("family", "field 'family' must be direct-sum or product");
  f.moduli = c.size_list("moduli");
  f.n = c.uint("n", 2);
  f.lattice_dim = c.uint("lattice_dim", f.kind == "product" ? 1 : 0);
  f.lattice_side = c.uint("lattice_side", 3);
  for (std::size_t k : f.moduli)
    if (k < 2) c.fail("moduli", "every modulus must be at least 2");
  if (f.n == 0) c.fail("n", "field 'n' must be positive");
  return f;
}

// Space-separated so the cell needs no CSV quoting.
inline std::string coords_cell(const std::vector<std::size_t>& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) out += (i ? " " : "") + std::to_string(c[i]);
  return out;
}

inline std::string triple(const std::array<std::size_t, 3>& t) {
  return std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]);
}

inline void run_norm(const Config& c, const std::filesystem::path& base, std::size_t budget, Report& rep) {
  const auto ds = family_sum(c, base);
  auto& t = rep.table("norm.csv", {"elements", "pairs_checked", "triangles_sampled", "axiom", "counterexample", "verdict"});
  const auto r =
      verify_quasi_norm_axioms(ds, budget, c.uint("samples", 0), c.uint("seed", 1), c.uint("pair_samples", 0));
  t.rows.push_back({std::to_string(ds.size()), std::string(r.pairs_sampled ? "sampled " : "") + std::to_string(r.pairs_checked),
                    std::to_string(r.triangles_sampled),
                    r.axiom, r.counterexample, verdict(r.pass)});
  nlohmann::json scales = nlohmann::json::array();
  for (std::size_t i = 1; i <= ds.summand_count(); ++i) scales.push_back(ds.scales().at(i).str());
  rep.certified["scales"] = scales;
}

inline void run_components(const Config& c, const std::filesystem::path& base, std::size_t budget, Report& rep) {
  const auto ds = family_sum(c, base);
  auto& t = rep.table("components.csv", {"mode", "triples_checked", "violations", "first_violation", "verdict"});
  const std::uint64_t samples = c.uint("samples", 0);
  QuasiUltrametricReport r;
  std::string mode;
  if (samples > 0) {
    r = quasi_ultrametric_check_sampled(ds, samples, c.uint("seed", 1));
    mode = "sampled";
  } else {
    // Triples with pairwise distinct classes, counted before running.
    std::vector<long double> sizes{1};
    for (std::size_t i = 1; i <= ds.summand_count(); ++i)
      sizes.push_back(static_cast<long double>(i < ds.summand_count() ? ds.stride(i + 1) : ds.size()) -
                      static_cast<long double>(ds.stride(i)));
    long double total = 0;
    for (std::size_t a = 0; a < sizes.size(); ++a)
      for (std::size_t b = a + 1; b < sizes.size(); ++b)
        for (std::size_t d = b + 1; d < sizes.size(); ++d) total += sizes[a] * sizes[b] * sizes[d];
    if (total > static_cast<long double>(budget))
      throw ResourceError("exhaustive check needs " + real(total) + " triples, budget " + std::to_string(budget));
    r = quasi_ultrametric_check(ds);
    mode = "exhaustive";
  }
  t.rows.push_back({mode, std::to_string(r.triples_checked), std::to_string(r.violations),
                    r.first_violation ? triple(*r.first_violation) : "", verdict(r.pass)});
}

inline void run_cover(const Config& c, const std::vector<Rational>& scales, std::size_t budget, Report& rep) {
  const std::string cover = c.str("cover", "reflection");
  if (cover == "reflection") {
    const std::size_t n = c.uint("n", 2), k = c.uint("k");
    if (n == 0 || n > 16) c.fail("n", "field 'n' must be between 1 and 16");
    if (k < 2) c.fail("k", "field 'k' must be at least 2");
    auto& t = rep.table("cover.csv", {"scale", "n", "k", "classes", "cover_ratio_certified", "max_component_diam",
                                      "bound", "verdict"});
    rep.certified["ratio"] = reflection_ratio(n);
    for (const auto& s : scales) {
      try {
        const auto r = reflection_cover(n, k, s);
        t.rows.push_back({s.str(), std::to_string(n), std::to_string(k), std::to_string(r.cover.classes.size()),
                          std::to_string(r.ratio), r.max_component_diameter.str(),
                          (Rational(r.ratio) * s).str(), "pass"});
      } catch (const InternalError&) {
        t.rows.push_back({s.str(), std::to_string(n), std::to_string(k), std::to_string(n + 1),
                          std::to_string(reflection_ratio(n)), "", (Rational(reflection_ratio(n)) * s).str(), "fail"});
      }
    }
  } else if (cover == "lattice") {
    const std::size_t n = c.uint("n", 2);
    if (n == 0) c.fail("n", "field 'n' must be positive");
    const auto w = c.has("window") ? c.rational_list("window") : std::vector<Rational>{Rational(-10), Rational(10)};
    if (w.size() != 2 || !w[0].is_integer() || !w[1].is_integer() || w[1] < w[0])
      c.fail("window", "field 'window' must be 'lo,hi' with integers lo <= hi");
    const auto window = LatticeWindow::cube(n, w[0].floor(), w[1].floor());
    auto& t = rep.table("cover.csv", {"scale", "n", "classes", "cover_ratio_certified", "max_component_diam", "bound",
                                      "verdict"});
    rep.certified["ratio"] = LatticeCoverSpec::certified_ratio(n);
    for (const auto& s : scales) {
      const auto ratio = LatticeCoverSpec::certified_ratio(n);
      try {
        const auto r = lattice_cover(n, s, window, budget);
        t.rows.push_back({s.str(), std::to_string(n), std::to_string(n + 1), std::to_string(ratio),
                          std::to_string(r.max_component_diameter), (Rational(ratio) * s).str(), "pass"});
      } catch (const InternalError&) {
        t.rows.push_back({s.str(), std::to_string(n), std::to_string(n + 1), std::to_string(ratio), "",
                          (Rational(ratio) * s).str(), "fail"});
      }
    }
  } else if (cover == "pullback") {
    FamilyDescriptor f;
    f.moduli = c.size_list("moduli");
    f.n = c.uint("n", 2);
    const auto ds = build_family(f);
    if (ds.size() > budget)
      throw ResourceError("truncation has " + std::to_string(ds.size()) + " points, budget " + std::to_string(budget));
    std::vector<UpperRow> rows;
    rep.certified["ratio"] = reflection_ratio(f.n);
    auto& t = rep.table("cover.csv", {"scale", "n", "cover_ratio_certified", "max_component_diam", "bound", "verdict"});
    for (const auto& s : scales) {
      const auto r = upper_row(ds, f, s);
      t.rows.push_back({r.scale.str(), std::to_string(r.n), std::to_string(r.ratio), r.max_component_diameter.str(),
                        (Rational(r.ratio) * r.scale).str(), verdict(r.pass)});
    }
  } else {
    c.fail("cover", "field 'cover' must be reflection, lattice or pullback");
  }
}

inline void lower_table(Report& rep, const std::vector<LowerRow>& rows) {
  auto& t = rep.table("lower.csv", {"dimension", "summand", "cube_side", "dilation_C", "verdict"});
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.dimension), std::to_string(r.summand), std::to_string(r.side), r.C.str(),
                      verdict(r.verified)});
}

inline void upper_table(Report& rep, const std::vector<UpperRow>& rows) {
  auto& t = rep.table("upper.csv", {"scale", "n", "cover_ratio_certified", "max_component_diam", "bound", "verdict"});
  for (const auto& r : rows)
    t.rows.push_back({r.scale.str(), std::to_string(r.n), std::to_string(r.ratio), r.max_component_diameter.str(),
                      (Rational(r.ratio) * r.scale).str(), verdict(r.pass)});
}

inline void run_cube(const Config& c, std::size_t budget, Report& rep) {
  const auto f = family_descriptor(c);
  const auto ds = build_family(f);
  if (ds.size() > budget)
    throw ResourceError("truncation has " + std::to_string(ds.size()) + " points, budget " + std::to_string(budget));
  lower_table(rep, lower_rows(ds, f));
}

inline void run_dimreport(const Config& c, const std::vector<Rational>& scales, std::size_t budget, Report& rep) {
  const auto f = family_descriptor(c);
  const auto ds = build_family(f);
  if (ds.size() > budget)
    throw ResourceError("truncation has " + std::to_string(ds.size()) + " points, budget " + std::to_string(budget));
  const auto r = dimension_report(f, scales);
  upper_table(rep, r.upper);
  lower_table(rep, r.lower);
  rep.certified["upper_ratio"] = reflection_ratio(f.n);
}

inline CyclicProductChain parse_chain(const Config& c) {
  const std::string chain = c.str("chain", "elementary");
  if (chain == "elementary") return CyclicProductChain::elementary_abelian(c.positive("length", 1024));
  try {
    return CyclicProductChain(c.size_list("chain"));
  } catch (const InvalidArgument& e) {
    c.fail("chain", std::string("field 'chain': ") + e.what());
  }
}

inline void run_adversarial(const Config& c, Report& rep) {
  ControlFunction f = ControlFunction::identity();
  try {
    f = ControlFunction::parse(c.str("control", "poly c=0/1,0/1,1/1"));
  } catch (const InvalidArgument& e) {
    c.fail("control", std::string("field 'control': ") + e.what());
  }
  const auto chain = parse_chain(c);
  const std::size_t depth = c.positive("depth", 4);
  auto& t = rep.table("adversarial.csv", {"round", "J", "f_J", "group_index", "witness", "witness_norm", "diameter",
                                          "exceeds", "connected", "verdict"});
  const auto res = adversarial_rounds(f, chain, depth);
  for (const auto& r : res.rounds)
    t.rows.push_back({std::to_string(r.round), r.J.str(), real(r.f_J), std::to_string(r.group_index),
                      coords_cell(r.witness), r.witness_norm.str(), r.diameter.str(), yes_no(r.exceeds),
                      yes_no(r.connected), verdict(r.pass())});
  if (!res.complete)
    t.rows.push_back({std::to_string(res.rounds.size() + 1), "", "", "", "", "", "", "", "", "fail"});
  rep.measured["rounds"] = res.rounds.size();
  if (!res.complete) rep.measured["stop_reason"] = res.stop_reason;
  nlohmann::json w = nlohmann::json::array();
  for (const auto& x : res.generator_weights) w.push_back(x.str());
  rep.certified["generator_weights"] = w;
}

// Byte metric of a complete lamplighter ball, or ResourceError.
inline ByteMetric lamplighter_metric(std::int64_t radius, std::size_t budget) {
  const Lamplighter L;
  const auto ball = lamplighter_ball(L, radius, budget);
  if (!ball.complete)
    throw ResourceError("lamplighter ball of radius " + std::to_string(radius) + " exceeds budget " +
                        std::to_string(budget) + " (complete up to radius " + std::to_string(ball.radius) + ")");
  ByteMetric m(ball.elements.size());
  for_each_ball_distance(L, ball, [&](std::size_t i, std::size_t j, std::int64_t d) {
    if (d > 255) throw ResourceError("distance above 255 in byte metric");
    m.mutable_row(i)[j] = m.mutable_row(j)[i] = static_cast<std::uint8_t>(d);
  });
  return m;
}

struct SpaceSource {
  bool lamplighter = true;
  std::int64_t radius = 6;
  FiniteMetricSpace file;
  bool rescale = true;
  Rational base{10};
};

inline SpaceSource space_source(const Config& c, const std::filesystem::path& base_dir) {
  SpaceSource s;
  const std::string kind = c.str("space", "lamplighter");
  s.rescale = c.boolean("rescale", true);
  s.base = c.rational("base", Rational(10));
  if (!(Rational(1) < s.base)) c.fail("base", "field 'base' must exceed 1");
  if (kind == "lamplighter") {
    s.radius = static_cast<std::int64_t>(c.uint("radius", 6));
  } else if (kind == "file") {
    s.lamplighter = false;
    const auto path = base_dir / c.str("metric_file");
    std::ifstream in(path);
    if (!in) c.fail("metric_file", "cannot open metric file " + path.string());
    s.file = read_metric_space(in);
  } else {
    c.fail("space", "field 'space' must be lamplighter or file");
  }
  return s;
}

inline std::function<long double(long double)> rescaling(const SpaceSource& s) {
  if (!s.rescale) return [](long double d) { return d; };
  const Rational base = s.base;
  return [base](long double d) { return log_base(1 + d, base); };
}

inline void run_defect(const Config& c, const std::filesystem::path& base_dir, std::size_t budget, Report& rep) {
  const auto src = space_source(c, base_dir);
  DefectResult d;
  std::size_t points = 0;
  if (src.lamplighter) {
    const auto m = lamplighter_metric(src.radius, budget);
    points = m.size();
    d = ultrametric_defect_rescaled(m, pair_minimax(m), rescaling(src));
  } else {
    points = src.file.size();
    if (points > budget) throw ResourceError("metric file has " + std::to_string(points) + " points");
    d = src.rescale ? ultrametric_defect(log_rescale(src.file, src.base)) : ultrametric_defect(src.file);
  }
  auto& w = rep.table("defect.csv", {"x", "y", "z", "d_xy", "max_side", "defect"});
  if (d.worst)
    w.rows.push_back({std::to_string(d.worst->x), std::to_string(d.worst->y), std::to_string(d.worst->z),
                      real(d.worst->d_xy), real(d.worst->max_side), real(d.worst->defect)});
  auto& t = rep.table("defect_summary.csv", {"points", "pairs", "k", "bound", "marginal", "verdict"});
  if (src.rescale) {
    const long double bound = log_base(2, src.base);
    const auto cmp = slack_le(d.k, bound);
    t.rows.push_back({std::to_string(points), std::to_string(d.pairs), real(d.k), real(bound), yes_no(cmp.marginal),
                      verdict(cmp.pass)});
    rep.certified["bound"] = real(bound);
  } else {
    t.rows.push_back({std::to_string(points), std::to_string(d.pairs), real(d.k), "", "false", "pass"});
  }
  rep.measured["k"] = real(d.k);
  rep.measured["degenerate"] = d.degenerate;
}

inline void run_epsilon(const Config& c, const std::filesystem::path& base_dir, std::size_t budget, Report& rep) {
  const auto src = space_source(c, base_dir);
  long double k = 0;
  const std::string ks = c.str("k", src.rescale ? "log2" : "0");
  if (ks == "log2") {
    k = log_base(2, src.base);
  } else {
    try {
      k = Rational::parse(ks).to_long_double();
    } catch (const Error& e) {
      c.fail("k", std::string("field 'k': ") + e.what());
    }
  }
  const std::string form = c.str("epsilon", "paper");
  if (form != "paper" && form != "zero") c.fail("epsilon", "field 'epsilon' must be paper or zero");
  const EpsilonForm e = form == "paper" ? EpsilonForm::paper(k) : EpsilonForm::zero(k);
  EpsilonReport r;
  std::size_t points = 0;
  if (src.lamplighter) {
    const auto m = lamplighter_metric(src.radius, budget);
    points = m.size();
    r = epsilon_check_rescaled(m, pair_minimax(m), rescaling(src), e);
  } else {
    points = src.file.size();
    if (points > budget) throw ResourceError("metric file has " + std::to_string(points) + " points");
    r = src.rescale ? epsilon_hypothesis_check(log_rescale(src.file, src.base), e)
                    : epsilon_hypothesis_check(src.file, e);
  }
  auto& t = rep.table("epsilon.csv", {"points", "checked", "k", "epsilon", "worst_x", "worst_y", "worst_z", "worst_gap",
                                      "marginal", "verdict"});
  t.rows.push_back({std::to_string(points), std::to_string(r.triples), real(k), e.name,
                    r.worst ? std::to_string(r.worst->x) : "", r.worst ? std::to_string(r.worst->y) : "",
                    r.worst ? std::to_string(r.worst->z) : "", r.worst ? real(r.worst->defect) : "",
                    yes_no(r.marginal), verdict(r.pass)});
  rep.certified["k"] = real(k);
}

inline void run_wreath(const Config& c, const std::vector<Rational>& scales, std::size_t budget, Report& rep) {
  const Lamplighter L;
  auto& checks = rep.table("wreath.csv", {"check", "parameter", "expected", "measured", "verdict"});
  const auto oracle_r = static_cast<std::int64_t>(c.uint("oracle_radius", 4));
  const auto ball = lamplighter_ball(L, oracle_r, budget);
  if (!ball.complete) throw ResourceError("oracle ball of radius " + std::to_string(oracle_r) + " exceeds budget");
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < ball.elements.size(); ++i) mismatches += L.word_length(ball.elements[i]) != ball.depth[i];
  checks.rows.push_back({"word_length_vs_bfs", std::to_string(oracle_r), "0", std::to_string(mismatches),
                         verdict(mismatches == 0)});
  const std::size_t gmax = c.uint("growth_max", 7);
  std::uint64_t pow3 = 1;
  for (std::size_t r = 0; r <= gmax; ++r, pow3 *= 3) {
    const std::uint64_t want = 2 * pow3 - 1;
    const std::uint64_t got = growth_function(r, budget > 100000000 ? budget : 100000000);
    checks.rows.push_back({"growth", std::to_string(r), std::to_string(want), std::to_string(got), verdict(got == want)});
  }

  const auto R = static_cast<std::int64_t>(c.uint("radius", 8));
  bool truncated = false;
  auto& growth = rep.table("growth.csv", {"r", "gamma", "scale", "radius", "component_size", "component_diameter",
                                          "boundary_touched", "verdict"});
  for (std::size_t r : c.has("growth_r") ? c.size_list("growth_r") : std::vector<std::size_t>{1}) {
    if (r == 0) c.fail("growth_r", "field 'growth_r' entries must be positive");
    const auto row = growth_control_check(L, static_cast<std::int64_t>(r), R, budget);
    truncated = truncated || row.control.partial;
    growth.rows.push_back({std::to_string(r), std::to_string(row.gamma), row.scale.str(),
                           std::to_string(row.control.radius), std::to_string(row.control.component_size),
                           std::to_string(row.control.component_diameter), yes_no(row.control.boundary_touched),
                           row.verdict});
  }
  auto& kernel = rep.table("kernel.csv", {"s", "component_size", "component_diameter", "boundary_touched"});
  for (const auto& s : scales) {
    const auto k = kernel_zero_dim_control(L, s, R, budget);
    truncated = truncated || k.partial;
    kernel.rows.push_back({k.scale.str(), std::to_string(k.component_size), std::to_string(k.component_diameter),
                           yes_no(k.boundary_touched)});
  }
  if (truncated)
    throw ResourceError("kernel ball of radius " + std::to_string(R) + " truncated at budget " + std::to_string(budget));
}

}  // namespace detail

struct RunOptions {
  std::string kind;
  Config config;
  std::filesystem::path base_dir;  // relative paths in the config resolve here
  std::optional<std::vector<Rational>> scales;
  std::optional<std::size_t> budget;
};

// Runs one experiment into `rep`. ParseError and ResourceError propagate;
// rows completed before a ResourceError stay in `rep`.
inline void run(const RunOptions& opt, Report& rep) {
  const Config& c = opt.config;
  rep.kind = opt.kind;
  if (!kind_keys().count(opt.kind)) throw ParseError(0, "unknown experiment kind '" + opt.kind + "'");
  c.validate(opt.kind);
  const std::vector<Rational> scales = opt.scales ? *opt.scales : (c.has("scales") ? c.rational_list("scales")
                                                                                   : std::vector<Rational>{});
  for (const auto& s : scales)
    if (!s.is_positive()) throw ParseError(c.line("scales"), "scales must be positive, got " + s.str());
  const std::size_t budget = opt.budget ? *opt.budget : c.positive("budget", 1000000);
  if (budget == 0) throw ParseError(0, "budget must be positive");
  const auto& k = opt.kind;
  if (k == "norm-axioms") detail::run_norm(c, opt.base_dir, budget, rep);
  else if (k == "quasi-ultrametric") detail::run_components(c, opt.base_dir, budget, rep);
  else if (k == "cover-certify") detail::run_cover(c, scales, budget, rep);
  else if (k == "cube-search") detail::run_cube(c, budget, rep);
  else if (k == "adversarial") detail::run_adversarial(c, rep);
  else if (k == "log-defect") detail::run_defect(c, opt.base_dir, budget, rep);
  else if (k == "epsilon-check") detail::run_epsilon(c, opt.base_dir, budget, rep);
  else if (k == "wreath-kernel") detail::run_wreath(c, scales, budget, rep);
  else detail::run_dimreport(c, scales, budget, rep);
}

// Writes every table plus summary.json into `dir`.
inline void write_report(const Report& rep, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& t : rep.tables) {
    std::ofstream out(dir / t.file, std::ios::binary);
    out << t.csv();
    if (!out) throw Error("cannot write " + (dir / t.file).string());
  }
  std::ofstream js(dir / "summary.json", std::ios::binary);
  js << rep.summary().dump(2) << '\n';
  if (!js) throw Error("cannot write " + (dir / "summary.json").string());
}

}  // namespace coarsedim::cli
