#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "kato/fit.hpp"
#include "kato/report.hpp"

namespace kato {
namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Property: exact power laws are recovered to rounding.
TEST(Fit, RecoversPowerLaw) {
  testing::Gen gen(60);
  for (int trial = 0; trial < 20; ++trial) {
    const double slope = gen.uniform(-3.0, 1.0);
    const double c = gen.uniform(0.1, 10.0);
    std::vector<double> N{8, 16, 32, 64};
    std::vector<double> y;
    for (double n : N) y.push_back(c * std::pow(n, slope));
    const LineFit fit = fit_loglog(N, y);
    EXPECT_NEAR(fit.slope, slope, 1e-12);
    EXPECT_NEAR(std::exp(fit.intercept), c, 1e-10 * c);
    EXPECT_NEAR(fit.r2, 1.0, 1e-12);
  }
}

TEST(Fit, LineFitAndErrors) {
  const LineFit f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_THROW(fit_loglog({1, 2}, {1, -1}), std::invalid_argument);
}

TEST(Fit, DecayVerdict) {
  std::vector<double> N{8, 16, 32, 64};
  std::vector<double> fast, slow;
  for (double n : N) {
    fast.push_back(std::pow(n, -1.8));
    slow.push_back(std::pow(n, -1.2));
  }
  EXPECT_TRUE(decay_fit(N, fast, -2.0, 0.4).pass);
  EXPECT_FALSE(decay_fit(N, slow, -2.0, 0.4).pass);
  const DecayFit zero = decay_fit(N, {0, 0, 0, 0}, -2.0, 0.4);
  EXPECT_TRUE(zero.skipped);
  EXPECT_TRUE(zero.pass);
  EXPECT_THROW(decay_fit({8, 16, 32}, {1, 0.5, 0.25}, -1.0), std::invalid_argument);
}

TEST(Fit, Monotone) {
  EXPECT_TRUE(monotone_nonincreasing({4, 3, 3.5, 2}, 0.2));
  EXPECT_FALSE(monotone_nonincreasing({4, 3, 3.7, 2}, 0.2));
  EXPECT_TRUE(monotone_nonincreasing({}, 0.0));
}

TEST(Report, RatioSpread) {
  const RatioReport r = ratio_report({"a", "b", "c"}, {2.0, 0.5, 1.0});
  EXPECT_DOUBLE_EQ(r.min, 0.5);
  EXPECT_DOUBLE_EQ(r.max, 2.0);
  EXPECT_DOUBLE_EQ(r.median, 1.0);
  EXPECT_DOUBLE_EQ(r.spread(), 4.0);
  EXPECT_THROW(ratio_report({"a"}, {NAN}), std::invalid_argument);
  EXPECT_THROW(ratio_report({"a"}, {0.0}), std::invalid_argument);
  EXPECT_NO_THROW(ratio_report({"a"}, {0.0}, false));
}

TEST(Report, CsvRoundTripPrecision) {
  testing::Gen gen(61);
  CsvTable t;
  t.columns = {"x", "y"};
  std::vector<double> xs;
  for (int i = 0; i < 50; ++i) {
    const double x = gen.normal() * std::pow(10.0, gen.integer(-300, 300));
    xs.push_back(x);
    t.add_row({x, static_cast<double>(i)});
  }
  const std::string path = (std::filesystem::temp_directory_path() / "kato_test.csv").string();
  write_csv(path, t);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,y");
  for (double x : xs) {
    std::getline(in, line);
    EXPECT_EQ(std::stod(line.substr(0, line.find(','))), x);
  }
  const std::string first = slurp(path);
  write_csv(path, t);
  EXPECT_EQ(slurp(path), first);
  std::filesystem::remove(path);
  EXPECT_THROW(t.add_row({1.0}), std::invalid_argument);
}

TEST(Report, VerdictJson) {
  Verdict v;
  v.name = "x";
  v.kind = "difference_decay";
  v.status = Status::hypothesis_violated;
  v.slope_or_ratio = -1.7;
  const nlohmann::json j = v.to_json();
  EXPECT_EQ(j.at("status"), "hypothesis-violated");
  EXPECT_EQ(j.at("name"), "x");
  EXPECT_DOUBLE_EQ(j.at("slope_or_ratio").get<double>(), -1.7);
  EXPECT_STREQ(to_string(Status::inconclusive), "inconclusive");
}

TEST(Report, SvgIsWellFormed) {
  PlotSpec spec;
  spec.title = "decay";
  spec.logx = spec.logy = true;
  spec.series.push_back({"a", {8, 16, 32}, {1e-2, 2e-3, -1.0}, true});
  const std::string path = (std::filesystem::temp_directory_path() / "kato_test.svg").string();
  write_svg(path, spec);
  const std::string s = slurp(path);
  EXPECT_NE(s.find("<svg"), std::string::npos);
  EXPECT_NE(s.find("</svg>"), std::string::npos);
  EXPECT_EQ(s.find("nan"), std::string::npos);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace kato
