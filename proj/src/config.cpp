#include "kato/config.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "kato/snapshot.hpp"

namespace kato {

using nlohmann::json;

namespace {

const std::set<std::string> kTopKeys = {"seed",     "output",     "grid",       "potential",
                                        "operator", "tolerances", "experiments"};
const std::set<std::string> kExperimentKeys = {"name",      "kind",     "params", "grid",
                                               "potential", "operator", "seed"};
// Kinds whose s must lie in (1/2, 1).
const std::set<std::string> kIKinds = {"i_difference_decay", "almost_conservation_sweep",
                                       "energy_comparison", "free_degeneracy"};
// Kinds that never build a spectral strategy on their grid.
const std::set<std::string> kStrategyFree = {"resonance_sweep", "lippmann_schwinger"};

json strategy_json(const StrategyConfig& s) {
  return {{"strategy", s.kind == Strategy::dense_eig ? "dense" : "chebyshev"},
          {"degree", s.chebyshev.degree},
          {"tol", s.chebyshev.tol},
          {"clamp_at_zero", s.chebyshev.clamp_at_zero},
          {"max_degree", s.chebyshev.max_degree}};
}

bool valid_name(const std::string& name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string dense_warning(const ExperimentSpec& e) {
  if (e.strategy.kind != Strategy::dense_eig || e.grid.is_null() ||
      kStrategyFree.count(e.kind)) {
    return {};
  }
  const Grid g = grid_from_json(e.grid, e.path + ".grid");
  if (g.size() <= kDenseCap) return {};
  return e.path + ": n^dim = " + std::to_string(g.size()) +
         " exceeds 4096: dense infeasible, chebyshev required";
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, const std::string& name, std::size_t index) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return splitmix(splitmix(root ^ h) + index);
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kTopKeys.count(key)) throw ConfigError(key + ": unknown key");
  }
  RunConfig cfg;
  const Params top(j, "config");
  if (const json* s = j.contains("seed") ? &j.at("seed") : nullptr) {
    if (!s->is_number_integer() || s->get<std::int64_t>() < 0) {
      throw ConfigError("seed: expected a non-negative integer");
    }
    cfg.seed = s->get<std::uint64_t>();
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw ConfigError("output: expected a string");
    cfg.output = j.at("output").get<std::string>();
  }
  if (j.contains("grid")) {
    cfg.grid = j.at("grid");
    grid_from_json(cfg.grid, "grid");
  }
  if (j.contains("potential")) cfg.potential = j.at("potential");
  const StrategyConfig top_strategy =
      strategy_from_json(j.contains("operator") ? j.at("operator") : json(), "operator");
  cfg.strategy = strategy_json(top_strategy);
  if (j.contains("tolerances")) {
    if (!j.at("tolerances").is_object()) throw ConfigError("tolerances: expected an object");
    cfg.tolerances = j.at("tolerances");
  }
  if (!cfg.grid.is_null() && !cfg.potential.is_null()) {
    const Grid g = grid_from_json(cfg.grid, "grid");
    try {
      potential_factory(g, cfg.potential);
    } catch (const std::exception& e) {
      const std::string msg = e.what();
      throw ConfigError(msg.rfind("potential", 0) == 0 ? msg : "potential: " + msg);
    }
  }

  const json experiments = j.contains("experiments") ? j.at("experiments") : json::array();
  if (!experiments.is_array()) throw ConfigError("experiments: expected an array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < experiments.size(); ++i) {
    const std::string path = "experiments[" + std::to_string(i) + "]";
    const json& x = experiments[i];
    if (!x.is_object()) throw ConfigError(path + ": expected an object");
    for (const auto& [key, value] : x.items()) {
      if (!kExperimentKeys.count(key)) throw ConfigError(path + "." + key + ": unknown key");
    }
    ExperimentSpec e;
    e.path = path;
    const Params p(x, path);
    e.name = p.text("name", "");
    if (!valid_name(e.name)) {
      throw ConfigError(path + ".name: missing or not made of [A-Za-z0-9_.-]");
    }
    if (!names.insert(e.name).second) {
      throw ConfigError(path + ".name: duplicate experiment name '" + e.name + "'");
    }
    e.kind = p.text("kind", "");
    if (!experiment_registry().count(e.kind)) {
      throw ConfigError(path + ".kind: unknown experiment kind '" + e.kind + "'");
    }
    e.params = x.contains("params") ? x.at("params") : json::object();
    if (!e.params.is_object()) throw ConfigError(path + ".params: expected an object");
    for (const auto& [key, value] : cfg.tolerances.items()) {
      if (!e.params.contains(key)) e.params[key] = value;
    }
    const Params params(e.params, path + ".params");
    for (const char* key : {"N_list", "N2_list"}) {
      if (params.find(key)) params.dyadic_list(key, {});
    }
    if (kIKinds.count(e.kind) && params.find("s")) {
      const double s = params.number("s");
      if (!(s > 0.5 && s < 1.0)) throw ConfigError(params.where("s") + ": must lie in (1/2, 1)");
    }

    std::string grid_path = "grid";
    if (x.contains("grid")) {
      e.grid = x.at("grid");
      grid_path = path + ".grid";
    } else {
      e.grid = cfg.grid;
    }
    if (e.grid.is_null() && e.kind != "oracle_equivalence") {
      throw ConfigError(path + ".grid: missing (no top-level grid either)");
    }
    std::string pot_path = "potential";
    if (x.contains("potential")) {
      e.potential = x.at("potential");
      pot_path = path + ".potential";
    } else {
      e.potential = cfg.potential;
    }
    if (!e.grid.is_null()) {
      const Grid g = grid_from_json(e.grid, grid_path);
      if (!e.potential.is_null()) {
        try {
          potential_factory(g, e.potential);
        } catch (const std::exception& err) {
          const std::string msg = err.what();
          throw ConfigError(msg.rfind("potential", 0) == 0
                                ? pot_path + msg.substr(std::string("potential").size())
                                : pot_path + ": " + msg);
        }
      }
    }
    e.strategy = x.contains("operator") ? strategy_from_json(x.at("operator"), path + ".operator")
                                        : top_strategy;
    e.seed = derive_seed(cfg.seed, e.name, i);
    if (x.contains("seed")) {
      const json& s = x.at("seed");
      if (!s.is_number_unsigned()) throw ConfigError(path + ".seed: expected a non-negative integer");
      e.seed = s.get<std::uint64_t>();
    }
    cfg.experiments.push_back(std::move(e));
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config: " + std::string(e.what()));
  }
  return parse_config(j);
}

void reseed(RunConfig& cfg, std::uint64_t root) {
  cfg.seed = root;
  for (std::size_t i = 0; i < cfg.experiments.size(); ++i) {
    cfg.experiments[i].seed = derive_seed(root, cfg.experiments[i].name, i);
  }
}

json canonical_json(const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["output"] = cfg.output;
  j["grid"] = cfg.grid;
  j["potential"] = cfg.potential;
  j["operator"] = cfg.strategy;
  j["tolerances"] = cfg.tolerances;
  json list = json::array();
  for (const auto& e : cfg.experiments) {
    list.push_back({{"name", e.name},
                    {"kind", e.kind},
                    {"params", e.params},
                    {"grid", e.grid},
                    {"potential", e.potential},
                    {"operator", strategy_json(e.strategy)},
                    {"seed", e.seed}});
  }
  j["experiments"] = list;
  return j;
}

int exit_status(const std::vector<Verdict>& verdicts) {
  bool inconclusive = false;
  for (const auto& v : verdicts) {
    if (v.status == Status::fail) return 1;
    if (v.status == Status::inconclusive) inconclusive = true;
  }
  return inconclusive ? 3 : 0;
}

RunSummary run(RunConfig cfg, const RunOptions& opt, std::ostream& log) {
  namespace fs = std::filesystem;
  if (opt.seed) reseed(cfg, *opt.seed);
  if (opt.out) cfg.output = *opt.out;
  if (opt.workers < 1) throw ConfigError("--workers: must be >= 1");

  std::vector<const ExperimentSpec*> selected;
  for (const auto& e : cfg.experiments) {
    if (!opt.only || e.name == *opt.only) selected.push_back(&e);
  }
  if (opt.only && selected.empty()) {
    throw ConfigError("--only: no experiment named '" + *opt.only + "'");
  }
  for (const auto* e : selected) {
    const std::string w = dense_warning(*e);
    if (!w.empty()) throw ConfigError(e->path + ".operator.strategy: " + w);
  }

  const fs::path root(cfg.output);
  fs::create_directories(root);
  write_json((root / "config.json").string(), canonical_json(cfg));

  std::vector<Verdict> verdicts(selected.size());
  std::vector<std::exception_ptr> errors(selected.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < selected.size(); i = next++) {
      try {
        const ExperimentOutput out = run_experiment(*selected[i]);
        write_experiment_output(out, (root / selected[i]->name).string());
        verdicts[i] = out.verdict;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_workers =
      std::min<int>(opt.workers, std::max<std::size_t>(selected.size(), 1));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  json summary = json::array();
  for (const auto& v : verdicts) {
    log << "[" << to_string(v.status) << "] " << v.name << " (" << v.kind
        << "): value=" << format_double(v.slope_or_ratio)
        << " target=" << format_double(v.target);
    if (!v.note.empty()) log << " -- " << v.note;
    log << '\n';
    summary.push_back({{"name", v.name}, {"status", to_string(v.status)}, {"pass", v.pass()}});
  }
  write_json((root / "summary.json").string(), summary);
  RunSummary result;
  result.verdicts = std::move(verdicts);
  result.exit_code = exit_status(result.verdicts);
  return result;
}

namespace {

std::vector<std::pair<std::string, Symbol>> plan_symbols(const ExperimentSpec& e) {
  const Params p(e.params, e.path + ".params");
  std::vector<std::pair<std::string, Symbol>> out;
  const double s = p.number("s", 0.9);
  auto N_list = [&](const std::vector<double>& fallback) {
    return p.dyadic_list("N_list", fallback);
  };
  if (e.kind == "difference_decay" || e.kind == "gradient_difference_decay") {
    const Symbol phi = p.find("profile") ? symbol_from_json(*p.find("profile"), "profile")
                                         : dyadic_bump(1.0);
    for (double N : N_list({8, 16, 32, 64})) out.emplace_back("phi_N", rescaled(phi, N));
  } else if (e.kind == "corollary_decay") {
    for (double N : N_list({8, 16, 32, 64})) out.emplace_back("chi_N", dyadic_bump(N));
  } else if (e.kind == "i_difference_decay" || e.kind == "energy_comparison") {
    for (double N : N_list({8, 16, 32, 64})) out.emplace_back("m_N", i_symbol(N, s));
  } else if (e.kind == "almost_conservation_sweep") {
    const double delta = p.number("delta", 0.1);
    const double dt = p.number("dt", delta / 2000);
    out.emplace_back("half step", propagator_symbol(dt / 2));
    out.emplace_back("full step", propagator_symbol(dt));
    for (double N : N_list({8, 16, 32, 64})) out.emplace_back("m_N", i_symbol(N, s));
  } else if (e.kind == "conservation") {
    const double dt = p.number("dt", 1e-2);
    out.emplace_back("half step", propagator_symbol(dt / 2));
    out.emplace_back("full step", propagator_symbol(dt));
  } else if (e.kind == "bilinear_ratio" || e.kind == "strichartz_ratio") {
    const double T = p.number("T", e.kind == "bilinear_ratio" ? 2.0 : 1.0);
    const int samples = p.integer("samples", 64);
    out.emplace_back("time step", propagator_symbol(T / (samples - 1)));
    if (e.kind == "bilinear_ratio") {
      out.emplace_back("P_N1", dyadic_bump(p.number("N1", 2.0)));
      for (double N : p.dyadic_list("N2_list", {8, 16, 32})) {
        out.emplace_back("P_N2", dyadic_bump(N));
      }
    }
  }
  return out;
}

std::string runtime_class(double work) {
  if (work < 1e8) return "seconds";
  if (work < 1e10) return "minutes";
  return "tens of minutes";
}

double estimate_work(const ExperimentSpec& e, const Grid& g) {
  const Params p(e.params, e.path + ".params");
  const double size = static_cast<double>(g.size());
  const double fft = size * std::log2(std::max(size, 2.0));
  const double dense = size * size * size;
  const bool is_dense = e.strategy.kind == Strategy::dense_eig && size <= kDenseCap;
  const double nN = static_cast<double>(p.numbers("N_list", {8, 16, 32, 64}).size());
  if (e.kind == "almost_conservation_sweep") {
    const double delta = p.number("delta", 0.1);
    const double steps = delta / p.number("dt", delta / 2000);
    return steps * 40.0 * fft + (is_dense ? dense : 0.0);
  }
  if (e.kind == "conservation") {
    return 3.0 * p.number("t_final", 0.5) / p.number("dt", 1e-2) * 40.0 * fft;
  }
  if (e.kind.find("decay") != std::string::npos || e.kind == "free_degeneracy") {
    const bool exact = p.text("norm", "exact") == "exact";
    return (exact ? nN * (size * size * size + size * fft) : nN * 16 * 200 * fft) + dense;
  }
  if (e.kind == "coercivity_check") {
    return p.integer("random_probes", 1000) * 4.0 * fft + 400.0 * fft;
  }
  if (e.kind == "resonance_sweep") return p.integer("count", 41) * 2.0 * dense;
  if (e.kind == "lippmann_schwinger") return 200.0 * 8.0 * fft;
  return 64.0 * 64.0 * fft + dense;
}

}  // namespace

void describe(const RunConfig& cfg, std::ostream& out) {
  out << "root seed " << cfg.seed << ", output " << cfg.output << ", "
      << cfg.experiments.size() << " experiment(s)\n";
  for (const auto& e : cfg.experiments) {
    out << "\n" << e.name << " [" << e.kind << "] seed " << e.seed << "\n";
    if (e.grid.is_null()) {
      out << "  grids: per-case (see params.grids)\n";
      continue;
    }
    const Grid g = grid_from_json(e.grid, e.path + ".grid");
    out << "  grid: dim " << g.dim() << ", L " << format_double(g.half_period()) << ", n "
        << g.n() << " (" << g.size() << " points, h " << format_double(g.spacing()) << ")\n";
    const Potential v = e.potential.is_null() ? Potential::zero(g)
                                              : potential_factory(g, e.potential);
    StrategyConfig bounds_only = e.strategy;
    bounds_only.kind = Strategy::chebyshev;
    const SchrodingerOp op(v, bounds_only);
    out << "  potential: " << v.family() << " " << v.params().dump() << "\n";
    out << "  spectral bounds: [" << format_double(op.energy_lo()) << ", "
        << format_double(op.energy_hi()) << "]\n";
    out << "  strategy: " << to_string(e.strategy.kind) << ", dense oracle "
        << (op.dense_feasible() ? "feasible" : "infeasible") << "\n";
    const std::string w = dense_warning(e);
    if (!w.empty()) out << "  warning: dense infeasible, chebyshev required\n";
    const Params p(e.params, e.path + ".params");
    if (p.find("N_list")) {
      const auto N = p.dyadic_list("N_list", {});
      out << "  plan: " << N.size() << " N-values {";
      for (std::size_t i = 0; i < N.size(); ++i) out << (i ? "," : "") << format_double(N[i]);
      out << "}";
      if (e.kind == "almost_conservation_sweep") {
        const double delta = p.number("delta", 0.1);
        const double dt = p.number("dt", delta / 2000);
        out << " x 1 trajectory each (one shared evolution, "
            << static_cast<long>(std::llround(delta / dt)) << " steps)";
      }
      out << "\n";
    }
    out << "  runtime class: " << runtime_class(estimate_work(e, g)) << "\n";
    if (e.strategy.kind == Strategy::chebyshev) {
      for (const auto& [role, m] : plan_symbols(e)) {
        out << "  chebyshev K for " << role << " " << m.name() << ": ";
        if (e.strategy.chebyshev.degree > 0) {
          out << e.strategy.chebyshev.degree << " (fixed)\n";
          continue;
        }
        try {
          out << chebyshev_series(op, m).degree() << " (auto, start "
              << initial_chebyshev_degree(op, m) << ")\n";
        } catch (const std::exception& err) {
          out << "uncertified: " << err.what() << "\n";
        }
      }
    }
  }
}

void print_norms(const RunConfig& cfg, std::ostream& out) {
  std::set<std::string> seen;
  auto report = [&](const std::string& label, const json& grid, const json& pot) {
    if (grid.is_null()) return;
    const std::string key = grid.dump() + "|" + pot.dump();
    if (!seen.insert(key).second) return;
    const Grid g = grid_from_json(grid, label + ".grid");
    const Potential v = pot.is_null() ? Potential::zero(g) : potential_factory(g, pot);
    const Potential neg = negative_part(v);
    out << label << ": " << v.family() << " " << v.params().dump() << " on dim " << g.dim()
        << ", L " << format_double(g.half_period()) << ", n " << g.n() << "\n";
    out << "  min " << format_double(v.min()) << ", max " << format_double(v.max()) << "\n";
    out << "  L^inf " << format_double(v.linf()) << ", L^3/2 " << format_double(v.lp(1.5))
        << ", weak L^3/2 " << format_double(v.weak_lp(1.5)) << "\n";
    out << "  B norm " << format_double(v.b()) << "\n";
    const double kv = g.dim() == 3 ? v.kato() : kato_norm_3d_lift(v);
    const double kn = g.dim() == 3 ? neg.kato() : kato_norm_3d_lift(neg);
    out << "  Kato norm" << (g.dim() == 3 ? "" : " (3d lift)") << " " << format_double(kv)
        << ", of V_- " << format_double(kn) << " (4 pi = "
        << format_double(4.0 * std::numbers::pi) << ", "
        << (kn < 4.0 * std::numbers::pi ? "below" : "NOT below") << ")\n";
  };
  report("config", cfg.grid, cfg.potential);
  for (const auto& e : cfg.experiments) report(e.name, e.grid, e.potential);
  if (seen.empty()) out << "no grid configured\n";
}

void snapshot_info(const std::string& path, std::ostream& out) {
  const SnapshotHeader h = read_snapshot_header(path);
  std::size_t points = 1;
  for (int a = 0; a < h.dim; ++a) points *= static_cast<std::size_t>(h.n);
  json j = {{"path", path},        {"dim", h.dim},         {"L", h.half_period},
            {"n", h.n},            {"complex", h.complex}, {"dtype", h.dtype},
            {"points", points}};
  out << j.dump(2) << "\n";
}

}  // namespace kato
