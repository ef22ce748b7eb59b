// Acceptance run: executes the acceptance config and prints one PASS/FAIL
// line per criterion.  Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "kato/config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Timed {
  kato::RunSummary summary;
  std::map<std::string, double> seconds;
};

// Runs every experiment on its own so that per-criterion runtimes are known.
Timed run_all(const kato::RunConfig& cfg, const fs::path& out) {
  Timed t;
  for (const auto& e : cfg.experiments) {
    kato::RunOptions opt;
    opt.out = out.string();
    opt.only = e.name;
    const auto start = std::chrono::steady_clock::now();
    kato::RunSummary s = kato::run(cfg, opt, std::cout);
    t.seconds[e.name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (auto& v : s.verdicts) t.summary.verdicts.push_back(std::move(v));
  }
  return t;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Checker {
 public:
  Checker(const kato::RunSummary& s, const std::map<std::string, double>& seconds)
      : seconds_(seconds) {
    for (const auto& v : s.verdicts) by_name_[v.name] = v.to_json();
  }

  const json& verdict(const std::string& name) {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw std::runtime_error("missing verdict " + name);
    return it->second;
  }

  double seconds(const std::string& name) const {
    auto it = seconds_.find(name);
    return it == seconds_.end() ? 0.0 : it->second;
  }

  void criterion(int id, const std::string& what, const std::function<bool(std::string&)>& check) {
    std::string detail;
    bool ok = false;
    try {
      ok = check(detail);
    } catch (const std::exception& e) {
      detail = std::string("error: ") + e.what();
    }
    std::cout << "criterion " << id << ": " << (ok ? "PASS" : "FAIL") << "  " << what;
    if (!detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << std::endl;
    if (!ok) ++failures_;
  }

  int failures() const { return failures_; }

 private:
  std::map<std::string, json> by_name_;
  std::map<std::string, double> seconds_;
  int failures_ = 0;
};

bool passed(const json& v) { return v.at("status") == "pass"; }

std::string num(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  std::string config = KATO_ACCEPTANCE_CONFIG;
  fs::path out = "acceptance_out";
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--config") config = argv[i + 1];
    else if (flag == "--out") out = argv[i + 1];
  }

  kato::RunConfig cfg;
  try {
    cfg = kato::load_config(config);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  fs::remove_all(out);
  const fs::path run_a = out / "a";
  const fs::path run_b = out / "b";
  const auto t0 = std::chrono::steady_clock::now();
  const Timed a = run_all(cfg, run_a);
  const double total_a = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  Checker c(a.summary, a.seconds);
  auto within = [&](const std::string& name, double limit, std::string& d) {
    const double s = c.seconds(name);
    d += (d.empty() ? "" : ", ") + name + " " + num(s) + " s";
    return s < limit;
  };

  c.criterion(1, "oracle equivalence, chebyshev vs dense_eig <= 1e-8", [&](std::string& d) {
    const json& v = c.verdict("oracle_equivalence");
    d = "max rel err " + num(v.at("slope_or_ratio").get<double>());
    return passed(v) && v.at("slope_or_ratio").get<double>() <= 1e-8 &&
           within("oracle_equivalence", 120.0, d);
  });

  c.criterion(2, "free-case degeneracy to 1e-10", [&](std::string& d) {
    const json& v = c.verdict("free_degeneracy");
    d = "max norm " + num(v.at("slope_or_ratio").get<double>());
    return passed(v) && v.at("slope_or_ratio").get<double>() <= 1e-10 &&
           within("free_degeneracy", 60.0, d);
  });

  auto slope_check = [&](const std::string& name, double bound, double limit, std::string& d) {
    const json& v = c.verdict(name);
    const double slope = v.at("slope_or_ratio").get<double>();
    d += (d.empty() ? "" : ", ") + name + " slope " + num(slope);
    return passed(v) && slope <= bound && within(name, limit, d);
  };

  c.criterion(3, "multiplier difference slope <= -1.6", [&](std::string& d) {
    return slope_check("difference_decay", -1.6, 300.0, d);
  });
  c.criterion(4, "gradient difference slope <= -0.6", [&](std::string& d) {
    return slope_check("gradient_difference_decay", -0.6, 300.0, d);
  });
  c.criterion(5, "corollary slope <= -1.6 and zero-potential case vanishes", [&](std::string& d) {
    const bool ok = slope_check("corollary_decay", -1.6, 300.0, d);
    const json& v = c.verdict("corollary_decay");
    const double z = v.at("metrics").at("zero_case_norm").get<double>();
    d += ", zero case " + num(z);
    return ok && z <= 1e-10;
  });
  c.criterion(6, "I-difference slopes <= -1.6 (beta 0) and <= -0.6 (beta 1)", [&](std::string& d) {
    const bool a0 = slope_check("i_difference_beta0", -1.6, 300.0, d);
    const bool a1 = slope_check("i_difference_beta1", -0.6, 300.0, d);
    return a0 && a1;
  });

  c.criterion(7, "mass 1e-9, energy drift 1e-6, dt-halving ratio 4 +- 30%", [&](std::string& d) {
    const json& cons = c.verdict("conservation");
    const json& cm = cons.at("metrics");
    const double ratio = cons.at("slope_or_ratio").get<double>();
    const json& ac = c.verdict("almost_conservation").at("metrics");
    const double mass = std::max(cm.at("max_mass_drift").get<double>(), ac.at("mass_drift").get<double>());
    const double energy = ac.at("energy_drift").get<double>();
    d = "ratio " + num(ratio) + ", mass " + num(mass) + ", headline energy " + num(energy);
    return passed(cons) && std::abs(ratio - 4.0) <= 1.2 && mass <= 1e-9 && energy <= 1e-6 &&
           within("conservation", 600.0, d);
  });

  c.criterion(8, "almost conservation: monotone drift, slope <= -0.7", [&](std::string& d) {
    const json& v = c.verdict("almost_conservation");
    const json& m = v.at("metrics");
    const double slope = v.at("slope_or_ratio").get<double>();
    d = std::string("status ") + v.at("status").get<std::string>() + ", slope " + num(slope) +
        ", monotone " + (m.at("monotone").get<bool>() ? "yes" : "no") + ", floor margin " +
        num(m.at("floor_margin").get<double>());
    return passed(v) && slope <= -0.7 && m.at("monotone").get<bool>() &&
           within("almost_conservation", 1800.0, d);
  });

  c.criterion(9, "coercivity: zero violations on 3 potentials", [&](std::string& d) {
    const json& v = c.verdict("coercivity");
    const json& m = v.at("metrics");
    int tested = 0;
    for (const json& pot : m.at("potentials")) tested += pot.at("hypothesis").get<bool>() ? 1 : 0;
    const double violations = v.at("slope_or_ratio").get<double>();
    d = "violations " + num(violations) + ", potentials meeting the Kato bound " +
        std::to_string(tested);
    return passed(v) && violations == 0.0 && tested == 3 && within("coercivity", 120.0, d);
  });

  c.criterion(10, "resonance: flag and eigenvalue crossing agree within 5%", [&](std::string& d) {
    const json& v = c.verdict("resonance");
    d = "relative gap " + num(v.at("slope_or_ratio").get<double>());
    return passed(v) && v.at("slope_or_ratio").get<double>() <= 0.05 &&
           within("resonance", 300.0, d);
  });

  c.criterion(11, "Lippmann-Schwinger residual 1e-8, monotone over 3 octaves", [&](std::string& d) {
    const json& v = c.verdict("lippmann_schwinger");
    const json& m = v.at("metrics");
    d = "residual " + num(m.at("weak_residual").get<double>()) + ", iterations " +
        m.at("weak_iterations").dump() + ", scattered " + m.at("sweep_scattered").dump();
    return passed(v) && m.at("weak_residual").get<double>() <= 1e-8 &&
           within("lippmann_schwinger", 600.0, d);
  });

  c.criterion(12, "norm-equivalence ratios in [1/10, 10]; bilinear within 1.6 of sqrt 2", [&](std::string& d) {
    const json& ne = c.verdict("norm_equivalence");
    const json& bl = c.verdict("bilinear");
    const json& nm = ne.at("metrics");
    d = "ratios [" + num(nm.at("min").get<double>()) + ", " + num(nm.at("max").get<double>()) +
        "], doubling " + bl.at("metrics").at("doubling_factors").dump();
    const bool ok = passed(ne) && nm.at("min").get<double>() >= 0.1 &&
                    nm.at("max").get<double>() <= 10.0 && passed(bl);
    const bool t1 = within("norm_equivalence", 600.0, d);
    const bool t2 = within("bilinear", 600.0, d);
    return ok && t1 && t2;
  });

  std::cout << "first pass " << num(total_a) << " s; rerunning for reproducibility" << std::endl;
  run_all(cfg, run_b);
  c.criterion(13, "rerun with the same seed reproduces every CSV bit for bit", [&](std::string& d) {
    int files = 0;
    int differ = 0;
    for (const auto& entry : fs::recursive_directory_iterator(run_a)) {
      if (entry.path().extension() != ".csv") continue;
      ++files;
      const fs::path other = run_b / fs::relative(entry.path(), run_a);
      if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
        ++differ;
        d += (d.empty() ? "" : " ") + fs::relative(entry.path(), run_a).string();
      }
    }
    d = std::to_string(files) + " csv files, " + std::to_string(differ) + " differ" +
        (d.empty() ? "" : ": " + d);
    return files > 0 && differ == 0;
  });

  std::cout << c.failures() << " criterion failure(s)" << std::endl;
  return c.failures() == 0 ? 0 : 1;
}
