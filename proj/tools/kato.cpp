#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kato/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral multipliers and I-method diagnostics for H = -Delta + V"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  int workers = 1;
  std::int64_t seed = -1;
  std::string only;
  std::string snapshot;

  auto* run = app.add_subcommand("run", "run the configured experiments");
  run->add_option("--config", config, "config JSON")->required();
  run->add_option("--out", out, "output directory (overrides the config)");
  run->add_option("--workers", workers, "concurrent experiments")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "root seed (overrides the config)")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--only", only, "run only the named experiment");

  auto* describe = app.add_subcommand("describe", "print the resolved plan");
  describe->add_option("--config", config, "config JSON")->required();
  describe->add_option("--seed", seed, "root seed")->check(CLI::NonNegativeNumber);

  auto* norms = app.add_subcommand("norms", "print potential norms");
  norms->add_option("--config", config, "config JSON")->required();

  auto* info = app.add_subcommand("snapshot-info", "print a field snapshot header");
  info->add_option("path", snapshot, "snapshot file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*info) {
      kato::snapshot_info(snapshot, std::cout);
      return 0;
    }
    kato::RunConfig cfg = kato::load_config(config);
    if (*describe) {
      if (seed >= 0) kato::reseed(cfg, static_cast<std::uint64_t>(seed));
      kato::describe(cfg, std::cout);
      return 0;
    }
    if (*norms) {
      kato::print_norms(cfg, std::cout);
      return 0;
    }
    kato::RunOptions opt;
    if (!out.empty()) opt.out = out;
    opt.workers = workers;
    if (seed >= 0) opt.seed = static_cast<std::uint64_t>(seed);
    if (!only.empty()) opt.only = only;
    const kato::RunSummary summary = kato::run(std::move(cfg), opt, std::cout);
    return summary.exit_code;
  } catch (const kato::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
