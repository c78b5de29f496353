#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "coarsedim/cli/runner.hpp"

namespace cli = coarsedim::cli;

namespace {

struct Args {
  std::string config;
  std::string out = "coarsedim-out";
  std::size_t budget = 0;
  std::string scales;
  std::vector<std::string> params;
  bool scales_given = false;
};

int execute(const std::string& kind, const Args& a) {
  cli::Report rep;
  rep.kind = kind;
  cli::RunOptions opt;
  opt.kind = kind;
  try {
    if (!a.config.empty()) {
      std::ifstream in(a.config);
      if (!in) throw coarsedim::ParseError(0, "cannot open config " + a.config);
      opt.config = cli::Config::parse(in);
      opt.base_dir = std::filesystem::path(a.config).parent_path();
    }
    for (const auto& p : a.params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos || eq == 0) throw coarsedim::ParseError(0, "--param needs key=value, got '" + p + "'");
      opt.config.set(p.substr(0, eq), p.substr(eq + 1));
    }
    if (a.budget > 0) opt.budget = a.budget;
    if (a.scales_given) {
      cli::Config tmp;
      tmp.set("scales", a.scales);
      opt.scales = tmp.rational_list("scales");
    }
    cli::run(opt, rep);
  } catch (const coarsedim::ParseError& e) {
    std::cerr << "coarsedim: config error: " << e.what() << '\n';
    return cli::kParseFailed;
  } catch (const coarsedim::InvalidArgument& e) {
    std::cerr << "coarsedim: config error: " << e.what() << '\n';
    return cli::kParseFailed;
  } catch (const coarsedim::InvalidScale& e) {
    std::cerr << "coarsedim: config error: " << e.what() << '\n';
    return cli::kParseFailed;
  } catch (const coarsedim::ResourceError& e) {
    rep.partial = true;
    rep.error = e.what();
    std::cerr << "coarsedim: resource budget exceeded: " << e.what() << '\n';
  } catch (const coarsedim::Error& e) {
    std::cerr << "coarsedim: " << e.what() << '\n';
    return cli::kCertificationFailed;
  }
  try {
    cli::write_report(rep, a.out);
  } catch (const std::exception& e) {
    std::cerr << "coarsedim: " << e.what() << '\n';
    return cli::kResourceExceeded;
  }
  const int code = rep.exit_code();
  std::cout << kind << ": " << rep.row_count() << " rows, " << rep.failed_rows() << " failed"
            << (rep.partial ? ", partial" : "") << " -> " << a.out << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coarse dimension experiments on finite truncations"};
  app.require_subcommand(1);
  Args args;
  std::string chosen;
  for (const auto& [sub, kind] : cli::subcommand_kinds()) {
    auto* s = app.add_subcommand(sub, "run the " + kind + " experiment");
    s->add_option("--config", args.config, "flat key = value config file");
    s->add_option("--out", args.out, "output directory")->capture_default_str();
    s->add_option("--budget", args.budget, "element budget")->check(CLI::PositiveNumber);
    s->add_option("--scales", args.scales, "comma-separated scale list");
    s->add_option("--param", args.params, "extra key=value config entry");
    s->callback([&chosen, k = kind] { chosen = k; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kParseFailed;
  }
  for (auto* s : app.get_subcommands())
    if (s->count("--scales")) args.scales_given = true;
  return execute(chosen, args);
}
