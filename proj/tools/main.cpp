// Command-line driver: solve / verify / sweep.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hmetric/config.hpp"
#include "hmetric/errors.hpp"
#include "hmetric/run.hpp"

namespace {

int load_and_run(const std::string& path, hmetric::RunOptions opts, bool sweep) {
  hmetric::ExperimentConfig cfg;
  try {
    cfg = hmetric::parse_config_file(path);
  } catch (const hmetric::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return hmetric::kExitConfig;
  } catch (const hmetric::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return hmetric::kExitConfig;
  } catch (const hmetric::IoError& e) {
    std::cerr << "I/O failure: " << e.what() << "\n";
    return hmetric::kExitIo;
  }
  if (sweep && cfg.mode != hmetric::RunMode::SweepR && cfg.mode != hmetric::RunMode::SweepAmplitude &&
      cfg.mode != hmetric::RunMode::Refine)
    cfg.mode = hmetric::RunMode::SweepR;
  if (!sweep && cfg.mode != hmetric::RunMode::Solve) {
    std::cerr << "config mode is " << hmetric::to_string(cfg.mode) << "; use the sweep command\n";
    return hmetric::kExitConfig;
  }
  return hmetric::run(cfg, opts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic metric solver and equivalence checks on the Poincare disk"};
  app.require_subcommand(1);
  app.set_version_flag("--version", HMETRIC_VERSION);

  hmetric::RunOptions opts;
  opts.log = &std::cerr;
  app.add_option("--out", opts.out, "Output directory (overrides output_dir)");
  app.add_option("--threads", opts.threads, "Concurrent member solves in sweeps")
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", opts.quiet, "No progress output");

  std::string config_path, dir;
  auto* solve = app.add_subcommand("solve", "Solve one configuration and write its artifacts");
  solve->add_option("config", config_path, "Experiment config (JSON)")->required();
  auto* verify = app.add_subcommand("verify", "Regenerate reports of an artifact directory");
  verify->add_option("dir", dir, "Artifact directory")->required();
  auto* sweep = app.add_subcommand("sweep", "Run a sweep-R, sweep-amplitude or refine config");
  sweep->add_option("config", config_path, "Experiment config (JSON)")->required();
  for (auto* sub : {solve, verify, sweep}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  if (*solve) return load_and_run(config_path, opts, false);
  if (*sweep) return load_and_run(config_path, opts, true);
  return hmetric::verify_directory(dir, opts);
}
