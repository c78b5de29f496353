#include <gtest/gtest.h>

#include <sstream>

#include "coarsedim/cli/runner.hpp"

using namespace coarsedim;
using namespace coarsedim::cli;

namespace {

Config parse(const std::string& text) {
  std::istringstream in(text);
  return Config::parse(in);
}

Report run_kind(const std::string& kind, const std::string& text) {
  RunOptions opt;
  opt.kind = kind;
  opt.config = parse(text);
  Report rep;
  run(opt, rep);
  return rep;
}

std::size_t parse_error_line(const std::string& kind, const std::string& text) {
  try {
    run_kind(kind, text);
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "no parse error";
  return 0;
}

}  // namespace

TEST(Config, CommentsBlanksAndValues) {
  const auto c = parse("# header\n\nk = 9   # trailing\nscales = 1, 3/2 ,2\n");
  EXPECT_EQ(c.uint("k"), 9u);
  EXPECT_EQ(c.rational_list("scales"), (std::vector<Rational>{Rational(1), Rational(3, 2), Rational(2)}));
  EXPECT_EQ(c.line("scales"), 4u);
}

TEST(Config, LineDiagnostics) {
  EXPECT_EQ(parse_error_line("cover-certify", "k = 9\nno equals sign\n"), 2u);
  EXPECT_EQ(parse_error_line("cover-certify", "k = 9\nk = 5\n"), 2u);
  EXPECT_EQ(parse_error_line("cover-certify", "n = 2\nk = nine\nscales = 1\n"), 2u);
  EXPECT_EQ(parse_error_line("cover-certify", "k = 9\n\nwidth = 3\n"), 3u);
  EXPECT_EQ(parse_error_line("cover-certify", "kind = cube-search\nk = 9\n"), 1u);
  EXPECT_EQ(parse_error_line("cover-certify", "k = 9\nbudget = 0\n"), 2u);
  EXPECT_EQ(parse_error_line("cover-certify", "k = 9\nscales = 1,-2\n"), 2u);
}

TEST(Config, MissingRequiredField) {
  EXPECT_THROW(run_kind("cover-certify", "n = 2\nscales = 1\n"), ParseError);
  EXPECT_THROW(run_kind("cube-search", "n = 2\n"), ParseError);
}

TEST(Runner, CoverCertifyExample) {
  const auto rep = run_kind("cover-certify", "n = 2\nk = 9\nscales = 1,2,3\n");
  ASSERT_EQ(rep.tables.size(), 1u);
  EXPECT_EQ(rep.tables[0].rows.size(), 3u);
  EXPECT_EQ(rep.exit_code(), kPass);
  EXPECT_EQ(rep.summary()["certified"]["ratio"], 28);
}

TEST(Runner, NormExample) {
  const auto rep = run_kind("norm-axioms", "moduli = 3,3\nn = 2\n");
  EXPECT_EQ(rep.exit_code(), kPass);
  EXPECT_EQ(rep.tables[0].rows[0][0], "81");
}

TEST(Runner, EmptyScaleListGivesEmptyPassingReport) {
  for (const auto& [kind, text] : std::vector<std::pair<std::string, std::string>>{
           {"cover-certify", "k = 9\n"}, {"dimension-report", "moduli = 3,5\n"}}) {
    const auto rep = run_kind(kind, text);
    EXPECT_EQ(rep.row_count(), 0u) << kind;
    EXPECT_EQ(rep.exit_code(), kPass) << kind;
  }
}

TEST(Runner, DeterministicCsv) {
  const std::string text = "moduli = 3,5\nscales = 1,2,3\n";
  const auto a = run_kind("dimension-report", text);
  const auto b = run_kind("dimension-report", text);
  ASSERT_EQ(a.tables.size(), b.tables.size());
  for (std::size_t i = 0; i < a.tables.size(); ++i) EXPECT_EQ(a.tables[i].csv(), b.tables[i].csv());
  EXPECT_EQ(a.summary().dump(), b.summary().dump());
}

TEST(Runner, StatusFollowsRowVerdicts) {
  // Kernel growth at r = 1 is a complete component with D = 1 < gamma(1) = 5.
  const auto rep = run_kind("wreath-kernel", "oracle_radius = 2\ngrowth_max = 3\ngrowth_r = 1\nradius = 6\n");
  EXPECT_EQ(rep.failed_rows(), 1u);
  EXPECT_EQ(rep.exit_code(), kCertificationFailed);
  EXPECT_EQ(rep.summary()["verdict"], "fail");
}

TEST(Runner, ResourceErrorKeepsCompletedRows) {
  RunOptions opt;
  opt.kind = "wreath-kernel";
  opt.config = parse("oracle_radius = 2\ngrowth_max = 2\ngrowth_r = 1\nradius = 8\n");
  opt.budget = 1000;
  Report rep;
  EXPECT_THROW(run(opt, rep), ResourceError);
  rep.partial = true;
  EXPECT_GT(rep.tables.at(0).rows.size(), 0u);
  EXPECT_EQ(rep.exit_code(), kResourceExceeded);
  EXPECT_EQ(rep.summary()["partial"], true);
}

TEST(Runner, CsvHeaders) {
  const auto rep = run_kind("wreath-kernel", "oracle_radius = 1\ngrowth_max = 1\ngrowth_r = 1\nradius = 4\nscales = 1\n");
  EXPECT_EQ(rep.tables.back().csv().substr(0, rep.tables.back().csv().find('\n')),
            "s,component_size,component_diameter,boundary_touched");
  const auto dim = run_kind("dimension-report", "moduli = 3\nscales = 1\n");
  EXPECT_EQ(dim.tables[0].csv().substr(0, dim.tables[0].csv().find('\n')),
            "scale,n,cover_ratio_certified,max_component_diam,bound,verdict");
  EXPECT_EQ(dim.tables[1].csv().substr(0, dim.tables[1].csv().find('\n')),
            "dimension,summand,cube_side,dilation_C,verdict");
}

TEST(Runner, AdversarialRowsAndStopRow) {
  const auto ok = run_kind("adversarial", "depth = 4\n");
  EXPECT_EQ(ok.tables[0].rows.size(), 4u);
  EXPECT_EQ(ok.exit_code(), kPass);
  const auto short_chain = run_kind("adversarial", "length = 8\ndepth = 4\n");
  EXPECT_EQ(short_chain.exit_code(), kCertificationFailed);
  EXPECT_TRUE(short_chain.summary()["measured"].contains("stop_reason"));
}

TEST(Runner, DefectOnSmallBall) {
  const auto rep = run_kind("log-defect", "radius = 3\n");
  EXPECT_EQ(rep.exit_code(), kPass);
  const auto raw = run_kind("epsilon-check", "radius = 3\nrescale = false\n");
  EXPECT_EQ(raw.tables[0].rows[0][2], "0");
}
