#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "confext/cli.hpp"

namespace {

void add_common(CLI::App* sub, confext::cli::RunConfig& cfg, std::vector<std::string>& tolerances) {
  sub->add_option("--n", cfg.n, "dimension n");
  sub->add_option("--resolution", cfg.resolution, "quadrature resolution (cells for search-max)");
  sub->add_option("--samples", cfg.samples, "number of random functions");
  sub->add_option("--seed", cfg.seed, "random seed");
  sub->add_option("--tolerance", tolerances, "tolerance override name=value (repeatable)");
  sub->add_option("--out", cfg.out, "write the report to this file instead of stdout");
  sub->add_option("--format", cfg.format, "json or csv (csv only for sweep)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of sharp conformally invariant trace inequalities"};
  app.require_subcommand(1);
  confext::cli::RunConfig cfg;
  std::vector<std::string> tolerances;
  const std::pair<const char*, const char*> commands[] = {
      {"verify-thm1", "Theorem 1 sweep, extremal candidates and Euler-Lagrange contrast"},
      {"verify-thm2", "Theorem 2 at the endpoint a = 2-n"},
      {"verify-carleman", "Carleman's inequality on the disk"},
      {"verify-corollary1", "Corollary 1 on B_4"},
      {"sweep", "tabulate S_{n,a} over a range of a"},
      {"search-max", "projected ascent toward a maximizer (n = 2)"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, cfg, tolerances);
    if (std::string(name) == "sweep") {
      sub->add_option("--a-min", cfg.a_min, "first a");
      sub->add_option("--a-max", cfg.a_max, "last a");
      sub->add_option("--a-step", cfg.a_step, "step in a");
    } else {
      sub->add_option("--a", cfg.a, "exponent a");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    for (const std::string& t : tolerances) confext::cli::add_tolerance_override(cfg, t);
    const confext::cli::Report report = confext::cli::run(cfg);
    for (const std::string& w : report.warnings) std::cerr << "warning: " << w << '\n';
    const std::string text = cfg.format == "csv" ? report.csv() : report.json();
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(cfg.out);
      if (!out) {
        std::cerr << "error: cannot write " << cfg.out << '\n';
        return 2;
      }
      out << text;
    }
    std::cerr << cfg.command << ": " << report.passed() << " passed, " << report.failed() << " failed, "
              << report.errored() << " errors\n";
    return report.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
