#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "umorse/error.hpp"
#include "umorse/scenario.hpp"

namespace {

bool write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return static_cast<bool>(std::cout);
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  return static_cast<bool>(f);
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = umorse::cli;
  const auto d = cli::defaults();

  CLI::App app{"Uniform-energy Morse toolkit: run scenarios and export plot data"};
  app.set_version_flag("--version", cli::version());
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path;
  std::string lines_path;
  std::optional<double> tol, step, perturb_eps;
  std::optional<int> samples, max_iters;
  std::optional<long long> seed;
  int jobs = 1;
  bool timing = false;

  auto* run = app.add_subcommand("run", "Execute a scenario file and write its JSON report");
  run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--out", out_path, "Report path (stdout when omitted)");
  run->add_option("--tol", tol, "Tie tolerance for minimizing segments (default " + d["tol"].dump() + ")");
  run->add_option("--samples", samples, "Curve samples per 1/k check; 0 selects 64k (default 0)");
  run->add_option("--step", step, "Flow step size (default " + d["flow"]["step"].dump() + ")");
  run->add_option("--max-iters", max_iters, "Flow iteration cap (default " + d["flow"]["max_iters"].dump() + ")");
  run->add_option("--perturb-eps", perturb_eps, "Restart displacement (default 0.05 * min period)");
  run->add_option("--seed", seed, "Seed for random perturbations");
  run->add_option("--jobs", jobs, "Concurrent scenarios in a sweep (default 1)")->check(CLI::PositiveNumber);
  run->add_flag("--timing", timing, "Record wall time in the report");
  run->add_option("--lines", lines_path, "Also write profile samples or trace iterations as JSON lines");

  std::string report_path;
  std::string kind;
  std::string csv_path;
  auto* plot = app.add_subcommand("plot", "Export a report series as CSV");
  plot->add_option("report", report_path, "Report JSON file")->required();
  plot->add_option("--kind", kind, "Series: trace, profile or curve")
      ->required()
      ->check(CLI::IsMember({"trace", "profile", "curve"}));
  plot->add_option("--out", csv_path, "CSV path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    cli::Overrides o;
    o.tol = tol;
    o.samples = samples;
    o.step = step;
    o.max_iters = max_iters;
    o.perturb_eps = perturb_eps;
    o.seed = seed;
    o.jobs = jobs;
    o.timing = timing;
    const cli::RunResult res = cli::run_scenario_file(scenario_path, o);
    if (!res.diagnostic.empty()) std::cerr << "umorse: " << res.diagnostic << "\n";
    if (!write_file(out_path, cli::dump(res.report))) {
      std::cerr << "umorse: cannot write " << out_path << "\n";
      return cli::kValidation;
    }
    if (!lines_path.empty() && res.exit_code != cli::kValidation) {
      try {
        write_file(lines_path, cli::json_lines(res.report));
      } catch (const umorse::ValidationError& e) {
        std::cerr << "umorse: " << e.what() << "\n";
      }
    }
    return res.exit_code;
  }

  std::ifstream f(report_path, std::ios::binary);
  if (!f) {
    std::cerr << "umorse: cannot read " << report_path << "\n";
    return cli::kValidation;
  }
  try {
    const auto report = umorse::Json::parse(f);
    if (!write_file(csv_path, cli::plot_csv(report, cli::plot_kind(kind)))) {
      std::cerr << "umorse: cannot write " << csv_path << "\n";
      return cli::kValidation;
    }
  } catch (const umorse::Json::exception& e) {
    std::cerr << "umorse: " << report_path << ": " << e.what() << "\n";
    return cli::kValidation;
  } catch (const umorse::ValidationError& e) {
    std::cerr << "umorse: " << e.what() << "\n";
    return cli::kValidation;
  }
  return cli::kOk;
}
