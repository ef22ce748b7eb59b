#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "kato/config.hpp"
#include "kato/snapshot.hpp"

namespace kato {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("kato_cfg_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string config_error(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

json small_config() {
  return {{"seed", 11},
          {"grid", {{"dim", 1}, {"L", 4.0}, {"n", 64}}},
          {"potential", {{"family", "gaussian_well"}, {"depth", -1.0}, {"width", 1.0}}},
          {"experiments",
           {{{"name", "free"}, {"kind", "free_degeneracy"}},
            {{"name", "norms"},
             {"kind", "norm_equivalence_ratio"},
             {"potential", nullptr},
             {"params", {{"probes", 16}}}}}}};
}

TEST(Config, EmptyExperimentsEchoesConfig) {
  const fs::path dir = fresh_dir("empty");
  RunConfig cfg = parse_config({{"seed", 3}, {"experiments", json::array()}});
  RunOptions opt;
  opt.out = dir.string();
  std::ostringstream log;
  const RunSummary s = run(cfg, opt, log);
  EXPECT_EQ(s.exit_code, 0);
  EXPECT_TRUE(s.verdicts.empty());
  ASSERT_TRUE(fs::exists(dir / "config.json"));
  const json echo = json::parse(slurp(dir / "config.json"));
  EXPECT_EQ(echo.at("seed"), 3);
  fs::remove_all(dir);
}

TEST(Config, ErrorsNameThePath) {
  json j = small_config();
  j["grid"]["n"] = 12;
  EXPECT_NE(config_error(j).find("grid.n"), std::string::npos) << config_error(j);

  j = small_config();
  j["experiments"][0]["kind"] = "nope";
  EXPECT_NE(config_error(j).find("experiments[0].kind"), std::string::npos) << config_error(j);

  j = small_config();
  j["experiments"][1]["name"] = "free";
  EXPECT_NE(config_error(j).find("experiments[1].name"), std::string::npos) << config_error(j);

  j = small_config();
  j["bogus"] = 1;
  EXPECT_NE(config_error(j).find("bogus"), std::string::npos);

  j = small_config();
  j["potential"]["width"] = -1.0;
  EXPECT_NE(config_error(j).find("potential.width"), std::string::npos) << config_error(j);

  j = small_config();
  j["experiments"][0]["kind"] = "almost_conservation_sweep";
  j["experiments"][0]["params"] = {{"N_list", {8, 16, 24, 32}}};
  EXPECT_NE(config_error(j).find("N_list"), std::string::npos) << config_error(j);

  j = small_config();
  j["experiments"][0]["kind"] = "i_difference_decay";
  j["experiments"][0]["params"] = {{"s", 1.2}};
  EXPECT_NE(config_error(j).find(".s"), std::string::npos) << config_error(j);
}

TEST(Config, CanonicalJsonIsStable) {
  const RunConfig a = parse_config(small_config());
  const json ca = canonical_json(a);
  const RunConfig b = parse_config(ca);
  EXPECT_EQ(canonical_json(b).dump(), ca.dump());
  EXPECT_TRUE(ca.at("experiments")[0].contains("seed"));
  EXPECT_TRUE(ca.at("experiments")[0].contains("operator"));
}

TEST(Config, SeedsDeriveFromRootNameAndIndex) {
  EXPECT_EQ(derive_seed(1, "a", 0), derive_seed(1, "a", 0));
  EXPECT_NE(derive_seed(1, "a", 0), derive_seed(2, "a", 0));
  EXPECT_NE(derive_seed(1, "a", 0), derive_seed(1, "b", 0));
  EXPECT_NE(derive_seed(1, "a", 0), derive_seed(1, "a", 1));
  RunConfig cfg = parse_config(small_config());
  const std::uint64_t before = cfg.experiments[0].seed;
  EXPECT_EQ(before, derive_seed(11, "free", 0));
  reseed(cfg, 12);
  EXPECT_EQ(cfg.experiments[0].seed, derive_seed(12, "free", 0));
}

TEST(Config, RerunIsBitIdentical) {
  const fs::path a = fresh_dir("rerun_a");
  const fs::path b = fresh_dir("rerun_b");
  std::ostringstream log;
  RunOptions oa;
  oa.out = a.string();
  RunOptions ob;
  ob.out = b.string();
  ob.workers = 2;
  const RunSummary sa = run(parse_config(small_config()), oa, log);
  const RunSummary sb = run(parse_config(small_config()), ob, log);
  EXPECT_EQ(sa.exit_code, sb.exit_code);
  int compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (entry.path().extension() != ".csv") continue;
    const fs::path other = b / fs::relative(entry.path(), a);
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(slurp(entry.path()), slurp(other)) << entry.path();
    ++compared;
  }
  EXPECT_GT(compared, 0);
  EXPECT_TRUE(fs::exists(a / "summary.json"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Config, OnlyFilter) {
  const fs::path dir = fresh_dir("only");
  RunOptions opt;
  opt.out = dir.string();
  opt.only = "free";
  std::ostringstream log;
  const RunSummary s = run(parse_config(small_config()), opt, log);
  ASSERT_EQ(s.verdicts.size(), 1u);
  EXPECT_EQ(s.verdicts[0].name, "free");
  opt.only = "missing";
  EXPECT_THROW(run(parse_config(small_config()), opt, log), ConfigError);
  fs::remove_all(dir);
}

TEST(Config, DescribeWarnsAboutDenseInfeasibility) {
  json j = small_config();
  j["grid"] = {{"dim", 2}, {"L", 4.0}, {"n", 128}};
  j["operator"] = {{"strategy", "dense"}};
  j["experiments"] = {{{"name", "d"}, {"kind", "difference_decay"}}};
  std::ostringstream out;
  describe(parse_config(j), out);
  EXPECT_NE(out.str().find("dense infeasible, chebyshev required"), std::string::npos) << out.str();
}

TEST(Config, ExitStatus) {
  Verdict pass;
  pass.status = Status::pass;
  Verdict hyp;
  hyp.status = Status::hypothesis_violated;
  Verdict inc;
  inc.status = Status::inconclusive;
  Verdict fail;
  fail.status = Status::fail;
  EXPECT_EQ(exit_status({pass, hyp}), 0);
  EXPECT_EQ(exit_status({pass, inc}), 3);
  EXPECT_EQ(exit_status({pass, inc, fail}), 1);
  EXPECT_EQ(exit_status({}), 0);
}

TEST(Config, SnapshotInfoPrintsHeader) {
  const fs::path dir = fresh_dir("snap");
  fs::create_directories(dir);
  const Grid g = Grid::make(2, 1.0, 8);
  write_snapshot((dir / "u.snap").string(), Field(g));
  std::ostringstream out;
  snapshot_info((dir / "u.snap").string(), out);
  const json h = json::parse(out.str());
  EXPECT_EQ(h.at("n"), 8);
  EXPECT_EQ(h.at("dim"), 2);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace kato
