#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kato/experiments.hpp"

namespace kato {

/// A validated run configuration.
struct RunConfig {
  std::uint64_t seed = 0;
  std::string output = "out";
  nlohmann::json grid;       // null when every experiment brings its own
  nlohmann::json potential;  // null means V = 0
  nlohmann::json strategy = nlohmann::json::object();
  nlohmann::json tolerances = nlohmann::json::object();
  std::vector<ExperimentSpec> experiments;
};

/// Validate and resolve a parsed JSON config.  Throws ConfigError naming
/// the offending path.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Sorted keys with every default spelled out.
nlohmann::json canonical_json(const RunConfig& cfg);

/// Per-experiment seed from the root seed, the experiment name and its index.
std::uint64_t derive_seed(std::uint64_t root, const std::string& name, std::size_t index);

/// Re-derive every experiment seed from a new root seed.
void reseed(RunConfig& cfg, std::uint64_t root);

struct RunOptions {
  std::optional<std::string> out;
  int workers = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> only;
};

struct RunSummary {
  std::vector<Verdict> verdicts;
  int exit_code = 0;
};

/// 0 when every verdict passes or reports a violated hypothesis, 1 when any
/// fails, 3 when the rest pass but some are inconclusive.
int exit_status(const std::vector<Verdict>& verdicts);

/// Run the selected experiments and write the artifact tree.
RunSummary run(RunConfig cfg, const RunOptions& opt, std::ostream& log);

/// Dry-run plan: grids, spectral bounds, dense feasibility, Chebyshev degrees.
void describe(const RunConfig& cfg, std::ostream& out);

/// Norms of the configured potentials.
void print_norms(const RunConfig& cfg, std::ostream& out);

/// Header of a field snapshot as JSON.
void snapshot_info(const std::string& path, std::ostream& out);

}  // namespace kato
