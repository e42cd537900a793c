#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cmclab/barrier.hpp"
#include "cmclab/errors.hpp"
#include "config.hpp"
#include "render.hpp"
#include "scenarios.hpp"

namespace fs = std::filesystem;
using namespace cmclab;
using namespace cmclab::experiment;

namespace {

constexpr int kUsageError = 2;

void print_checks(const json& report) {
  for (const auto& c : report.at("checks")) {
    std::cout << (c.at("pass").get<bool>() ? "  pass  " : "  FAIL  ") << c.at("name").get<std::string>()
              << "  observed=" << c.at("observed").dump() << '\n';
  }
}

int cmd_run(const std::string& config, const std::string& output) {
  const ExperimentConfig cfg = load_config(config);
  const fs::path dir = output.empty() ? fs::path(cfg.output_dir) : fs::path(output);
  const RunResult r = run(cfg, dir);
  std::cout << cfg.scenario << " -> " << dir.string() << '\n';
  print_checks(r.report);
  std::cout << (r.pass ? "PASS" : "FAIL") << '\n';
  return r.pass ? 0 : 1;
}

int cmd_validate(const std::string& config) {
  const auto errors = validate_config(read_json_file(config));
  if (errors.empty()) {
    std::cout << config << ": ok\n";
    return 0;
  }
  for (const auto& e : errors) std::cerr << config << ": " << e << '\n';
  return kUsageError;
}

int cmd_report(const std::string& dir) {
  const json report = read_json_file(fs::path(dir) / "report.json");
  for (const auto& f : render_artifacts(dir, report)) std::cout << f << '\n';
  print_checks(report);
  return 0;
}

int cmd_barrier(double H, double t, int points) {
  const UnduloidBarrier b(H, t);
  std::printf("r,h_t,f_prime,g\n");
  for (int k = 0; k < points; ++k) {
    const double r = b.r1() + (b.r2() - b.r1()) * (k + 0.5) / points;
    std::printf("%.17g,%.17g,%.17g,%.17g\n", r, eval(b, r), radial_slope(r, b), slope_ratio(r, b));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cmclab: constant mean curvature graph experiments"};
  app.require_subcommand(1);

  std::string config, output, dir;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write its report");
  run_cmd->add_option("config", config, "Configuration file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("-o,--output", output, "Output directory (overrides output_dir)");

  auto* validate_cmd = app.add_subcommand("validate", "Check a configuration against the schema");
  validate_cmd->add_option("config", config, "Configuration file")->required()->check(CLI::ExistingFile);

  auto* report_cmd = app.add_subcommand("report", "Re-render plots and tables of a finished run");
  report_cmd->add_option("dir", dir, "Run directory")->required()->check(CLI::ExistingDirectory);

  double H = 0.5, t = 0.25;
  int points = 101;
  auto* barrier_cmd = app.add_subcommand("barrier", "Tabulate the unduloid barrier as CSV");
  barrier_cmd->add_option("--H", H, "Mean curvature")->check(CLI::PositiveNumber);
  barrier_cmd->add_option("--t", t, "Neck parameter in (0, 1/(4H))")->check(CLI::PositiveNumber);
  barrier_cmd->add_option("--points", points, "Number of radii")->check(CLI::Range(2, 1000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsageError;
  }

  try {
    if (*run_cmd) return cmd_run(config, output);
    if (*validate_cmd) return cmd_validate(config);
    if (*report_cmd) return cmd_report(dir);
    if (*barrier_cmd) return cmd_barrier(H, t, points);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kUsageError;
}
