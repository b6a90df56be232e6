// Command-line front end: build spacelike constant-mean-curvature
// surfaces with prescribed singular curves from a JSON run configuration,
// or just classify / validate without integrating.
//
// Exit codes: 0 success, 2 configuration error (including command-line
// usage errors), 3 numerical or I/O failure.  The MINKCMC_LOG environment
// variable (debug|info|warn|error|off) controls log verbosity.

#include <exception>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "minkcmc/config.hpp"
#include "minkcmc/pipeline.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

void print_written(const minkcmc::PipelineResult& result) {
  for (const std::string& path : result.written) std::cout << "wrote " << path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spacelike constant-mean-curvature surfaces with prescribed"
               " singularities in Lorentz-Minkowski 3-space"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int threads = 1;

  CLI::App* run = app.add_subcommand(
      "run", "Build the surface(s) and write mesh, cell map, singular curve and report");
  run->add_option("--config", config_path, "Run configuration (JSON)")->required();
  run->add_option("--out-dir", out_dir, "Directory for relative output paths (default .)");
  run->add_option("--threads", threads, "Worker threads for per-sample assembly")
      ->check(CLI::PositiveNumber);

  CLI::App* classify = app.add_subcommand(
      "classify", "Classify the singular points only; no integration, report only");
  classify->add_option("--config", config_path, "Run configuration (JSON)")->required();

  CLI::App* validate =
      app.add_subcommand("validate", "Parse a configuration and echo its canonical form");
  validate->add_option("--config", config_path, "Run configuration (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;  // --help exits 0, usage errors are config errors
  }

  minkcmc::RunConfig cfg;
  try {
    cfg = minkcmc::parse_config(config_path);
    if (validate->parsed()) {
      std::cout << minkcmc::serialize_config(cfg);
      return 0;
    }
    // Data-level validation (e.g. simultaneous zeros of s and t) is still
    // a configuration problem; surface it before any numerics start.
    const minkcmc::BjorlingData data = minkcmc::bjorling_from_config(cfg);
    (void)data;
  } catch (const minkcmc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (classify->parsed()) {
      print_written(minkcmc::classify_only(cfg, out_dir));
    } else {
      print_written(minkcmc::run_pipeline(cfg, out_dir, threads));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
