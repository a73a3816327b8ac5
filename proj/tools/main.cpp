// hyopf: import, validate, solve and report on hybrid AC/DC OPF cases.
//
// Exit codes: 0 success, 1 usage/file/validation error, 2 solver did not
// reach optimality or a guard (e.g. the dense SDR size limit) tripped.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hyopf/grid_document.hpp"
#include "hyopf/matpower.hpp"
#include "hyopf/pipeline.hpp"
#include "hyopf/report.hpp"
#include "hyopf/validation.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kNotOptimal = 2;

void print_violations(const hyopf::ValidationReport& report, std::ostream& out) {
  out << report.violations.size() << " violation(s)\n";
  for (const auto& v : report.violations) {
    out << "  [" << v.rule << "] " << v.entity << ": " << v.message << "\n";
  }
}

int cmd_import(const std::string& input, const std::string& output, int samples) {
  const auto mpc = hyopf::parse_matpower(hyopf::read_text_file(input));
  for (const auto& w : mpc.warnings) std::cerr << "warning: " << w << "\n";
  const auto grid = hyopf::to_grid(mpc, samples);
  hyopf::save_document(grid, output);
  std::cout << "imported " << grid.buses.size() << " buses, " << grid.branches.size()
            << " branches, " << grid.injectors.size() << " injectors into " << output << "\n";
  return kOk;
}

int cmd_validate(const std::string& input) {
  const auto grid = hyopf::load_document(input);
  const auto report = hyopf::validate(grid);
  print_violations(report, std::cout);
  std::cout << "subgrids: " << report.subgrids.size() << "\n"
            << "dc radial: " << (report.dc_radial ? "yes" : "no") << "\n"
            << "hybrid architecture: " << (report.hybrid_architecture ? "yes" : "no") << "\n";
  return report.ok() ? kOk : kInvalid;
}

struct SolveArgs {
  std::string input;
  std::string relaxation = "socr";
  double tau = 0.0;
  std::optional<double> reference;
  std::string json;
  std::size_t sdr_limit = hyopf::kDenseSdrLimit;
  bool no_mode_fix = false;
};

int cmd_solve(const SolveArgs& args) {
  const auto grid = hyopf::load_document(args.input);
  const auto validation = hyopf::validate(grid);
  if (!validation.ok()) {
    print_violations(validation, std::cerr);
    return kInvalid;
  }
  hyopf::PipelineOptions options;
  options.relaxation =
      args.relaxation == "sdr" ? hyopf::RelaxationKind::sdr : hyopf::RelaxationKind::socr;
  options.tau = args.tau;
  options.solver = hyopf::SolverConfig::from_env();
  options.sdr_limit = args.sdr_limit;
  options.mode_fix = !args.no_mode_fix;
  hyopf::OpfResult result;
  try {
    result = hyopf::run_opf(grid, options);
  } catch (const hyopf::ValidationError& e) {
    print_violations(e.report(), std::cerr);
    return kInvalid;
  } catch (const hyopf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNotOptimal;
  }
  const auto name = std::filesystem::path(args.input).stem().string();
  const auto report = hyopf::make_report(result, name, args.reference);
  std::cout << hyopf::format_table(report);
  if (!args.json.empty()) hyopf::write_text_file(args.json, hyopf::to_json(report));
  return result.optimal() ? kOk : kNotOptimal;
}

int cmd_report(const std::string& input) {
  const auto report = hyopf::report_from_json(hyopf::read_text_file(input));
  std::cout << hyopf::format_table(report);
  return report.status == "optimal" ? kOk : kNotOptimal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid AC/DC optimal power flow via convex relaxation"};
  app.require_subcommand(1);

  std::string import_in, import_out;
  int samples = 10;
  auto* import = app.add_subcommand("import", "Convert a MATPOWER case into a grid document");
  import->add_option("case", import_in, "MATPOWER case file")->required();
  import->add_option("-o,--output", import_out, "Grid document to write")->required();
  import->add_option("--samples", samples, "Sample points per polynomial cost")
      ->check(CLI::Range(2, 10000));

  std::string validate_in;
  auto* validate = app.add_subcommand("validate", "Check a grid document");
  validate->add_option("document", validate_in, "Grid document")->required();

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Solve the OPF relaxation of a grid document");
  solve->add_option("document", solve_args.input, "Grid document")->required();
  solve->add_option("--relaxation", solve_args.relaxation, "socr or sdr")
      ->check(CLI::IsMember({"socr", "sdr"}));
  solve->add_option("--loss-price", solve_args.tau, "Loss price tau >= 0")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--reference", solve_args.reference, "Reference objective for the gap");
  solve->add_option("--json", solve_args.json, "Write the JSON report here");
  solve->add_option("--sdr-limit", solve_args.sdr_limit, "Largest bus count for the dense SDR");
  solve->add_flag("--no-mode-fix", solve_args.no_mode_fix, "Skip the converter mode-fix re-solve");

  std::string report_in;
  auto* report = app.add_subcommand("report", "Print a saved JSON report");
  report->add_option("solution", report_in, "JSON report from solve --json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*import) return cmd_import(import_in, import_out, samples);
    if (*validate) return cmd_validate(validate_in);
    if (*solve) return cmd_solve(solve_args);
    if (*report) return cmd_report(report_in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
