// Command-line harness: runs the surface test problems and the geometric
// diagnostic suites, writing CSV tables and VTK frames.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "surffv/diagnostics.hpp"
#include "surffv/testproblems.hpp"

namespace {

std::pair<int, int> parse_levels(const std::string& text) {
  const auto pos = text.find("..");
  if (pos == std::string::npos) {
    const int l = std::stoi(text);
    return {l, l};
  }
  return {std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + 2))};
}

int run_command(int tp, const std::string& levels, double lambda, bool lambda_set,
                double cfl, const std::string& out, bool second_order, int vtk_every) {
  surffv::RunConfig config;
  config.tp = tp;
  if (!levels.empty()) config.levels = parse_levels(levels);
  if (lambda_set) config.lambda = lambda;
  config.cfl_factor = cfl;
  config.out_dir = out;
  config.second_order = second_order;
  config.vtk_every = vtk_every;

  const surffv::TestProblemResult result = surffv::run_test_problem(config);
  if (!result.table.rows.empty()) {
    std::cout << surffv::format_table(result.table);
  }
  if (result.solution_range > 0.0 && result.table.rows.empty()) {
    std::printf("solution range at T: %.6g\n", result.solution_range);
  }
  std::printf("mass drift: %.3e\n", result.max_mass_drift);
  std::printf("%s tp%d: %s\n", result.pass ? "PASS" : "FAIL", tp, result.criterion.c_str());
  return result.pass ? 0 : 1;
}

int diagnose_command(const std::string& suite, const std::string& levels,
                     const std::string& out) {
  auto [lo, hi] = levels.empty() ? std::pair<int, int>{1, 5} : parse_levels(levels);
  if (!out.empty()) std::filesystem::create_directories(out);
  const surffv::SuiteOutcome outcome = surffv::run_diagnostic_suite(suite, lo, hi, out);
  std::printf("%s %s: %s\n", outcome.pass ? "PASS" : "FAIL", suite.c_str(),
              outcome.summary.c_str());
  return outcome.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite volume solver for conservation laws on moving triangulated surfaces"};
  app.require_subcommand(1);

  int tp = 1;
  std::string levels;
  double lambda = 0.0;
  double cfl = 0.9;
  std::string out;
  bool second_order = false;
  int vtk_every = 0;

  CLI::App* run = app.add_subcommand("run", "Run a test problem and tabulate EOCs");
  run->add_option("--tp", tp, "Test problem id")->required()->check(CLI::Range(1, 7));
  run->add_option("--levels", levels, "Refinement levels a..b");
  CLI::Option* lambda_opt = run->add_option("--lambda", lambda, "Lax-Friedrichs viscosity");
  run->add_option("--cfl", cfl, "CFL factor in (0,1]");
  run->add_option("--out", out, "Output directory for CSV/VTK artifacts");
  run->add_flag("--second-order", second_order, "Use the second-order flat scheme");
  run->add_option("--vtk-every", vtk_every, "Emit a VTK frame every n steps");

  std::string suite;
  std::string diag_levels;
  std::string diag_out;
  CLI::App* diagnose = app.add_subcommand("diagnose", "Measured-order geometry suites");
  diagnose->add_option("--suite", suite, "normals | ratios | conormals | flux | quotients")
      ->required();
  diagnose->add_option("--levels", diag_levels, "Refinement levels a..b");
  diagnose->add_option("--out", diag_out, "Output directory for CSV reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) {
      return run_command(tp, levels, lambda, lambda_opt->count() > 0, cfl, out, second_order,
                         vtk_every);
    }
    return diagnose_command(suite, diag_levels, diag_out);
  } catch (const surffv::ParameterError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
