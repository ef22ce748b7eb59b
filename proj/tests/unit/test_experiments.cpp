#include <cmath>
#include <filesystem>
#include <numbers>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "kato/experiments.hpp"
#include "kato/fft.hpp"

namespace kato {
namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

StrategyConfig chebyshev_strategy() {
  StrategyConfig s;
  s.kind = Strategy::chebyshev;
  return s;
}

ExperimentSpec spec_for(const std::string& kind, json grid, json potential, json params = json::object()) {
  ExperimentSpec s;
  s.name = kind;
  s.kind = kind;
  s.grid = std::move(grid);
  s.potential = std::move(potential);
  s.params = std::move(params);
  s.seed = 5;
  s.path = "experiments[0]";
  return s;
}

TEST(Experiments, RegistryHasEveryKind) {
  const auto& reg = experiment_registry();
  for (const char* k : {"oracle_equivalence", "free_degeneracy", "difference_decay",
                        "gradient_difference_decay", "corollary_decay", "i_difference_decay",
                        "energy_comparison", "conservation", "almost_conservation_sweep",
                        "coercivity_check", "resonance_sweep", "lippmann_schwinger",
                        "norm_equivalence_ratio", "sobolev_ratio", "strichartz_ratio",
                        "bilinear_ratio"}) {
    EXPECT_EQ(reg.count(k), 1u) << k;
  }
}

TEST(Experiments, FreeDegeneracyPasses) {
  const ExperimentOutput out = run_experiment(
      spec_for("free_degeneracy", {{"dim", 1}, {"L", 4.0}, {"n", 64}}, nullptr));
  EXPECT_EQ(out.verdict.status, Status::pass) << out.verdict.note;
  EXPECT_LE(out.verdict.slope_or_ratio, 1e-10);
}

TEST(Experiments, DifferenceDecayVanishesForZeroPotential) {
  const Grid g = Grid::make(1, 8.0, 256);
  const SchrodingerOp op(Potential::zero(g));
  SweepOptions opt;
  const DecaySweep d = difference_decay(op, dyadic_bump(1.0), {1, 2, 4, 8}, 2.0, opt);
  EXPECT_TRUE(d.fit.skipped);
  for (double e : d.exact) EXPECT_LT(e, 1e-10);
}

TEST(Experiments, HeadroomIsChecked) {
  const Grid g = Grid::make(1, 4.0, 64);
  const SchrodingerOp op(Potential::zero(g));
  EXPECT_THROW(require_headroom(op, {8, 16, 32, 64}), std::invalid_argument);
  EXPECT_NO_THROW(require_headroom(op, {1, 2}));
}

TEST(Experiments, PowerLawDatumIsMeanZeroAndBandLimited) {
  const Grid g = Grid::make(2, 2.0, 32);
  const Field u = power_law_datum(g, 1.5, 3, 6.0);
  const Eigen::VectorXcd c = forward_transform(u);
  EXPECT_LT(std::abs(c[0]), 1e-15);
  for (Eigen::Index p = 0; p < c.size(); ++p) {
    if (g.k_abs()[p] >= 6.0) EXPECT_LT(std::abs(c[p]), 1e-14);
  }
  EXPECT_EQ(power_law_datum(g, 1.5, 3, 6.0).values(), u.values());
}

TEST(Experiments, NormalizeIEnergy) {
  const Grid g = Grid::make(1, 4.0, 128);
  const SchrodingerOp op(Potential::zero(g));
  const Field u = power_law_datum(g, 1.2, 9, 0.0);
  const std::vector<double> N{2, 4, 8};
  const Field w = normalize_i_energy(op, u, N, 0.9, 1.0);
  double worst = 0.0;
  for (double n : N) worst = std::max(worst, i_energy(op, w, n, 0.9));
  EXPECT_NEAR(worst, 1.0, 1e-12);
}

TEST(Experiments, LinearFlowHasNoIDrift) {
  // I commutes with exp(-itH), so without the nonlinearity E[I u] is constant.
  const Grid g = Grid::make(1, 4.0, 64);
  const SchrodingerOp op(Potential::zero(g));
  const Field u0 = power_law_datum(g, 1.5, 1, 0.0);
  AlmostConservationOptions opt;
  opt.kappa = 0.0;
  opt.delta = 0.02;
  opt.dt = 1e-3;
  opt.snapshot_stride = 5;
  opt.max_retries = 0;
  const AlmostConservation r = almost_conservation_sweep(op, u0, 0.9, {1, 2, 4, 8}, opt);
  for (double d : r.drift) EXPECT_LT(d, 1e-11);
}

TEST(Experiments, BandLimitedDriftEqualsEnergyDrift) {
  // Data below N_min / 2 is fixed by every I_N, so E[I_N u] = E[u] until the
  // flow moves energy past N_min / 2; over a short run the two agree.
  const Grid g = Grid::make(1, 8.0, 128);
  const SchrodingerOp op(Potential::zero(g));
  const Field u0 = 2.0 * power_law_datum(g, 1.0, 2, 1.0);
  AlmostConservationOptions opt;
  opt.delta = 0.05;
  opt.dt = 1e-2;
  opt.snapshot_stride = 1;
  opt.max_retries = 0;
  const AlmostConservation r = almost_conservation_sweep(op, u0, 0.9, {4, 8, 16, 32}, opt);
  const double e = r.series.energy_drift;
  ASSERT_GT(e, 0.0);
  for (double d : r.drift) {
    EXPECT_LT(d, 2.0 * e);
    EXPECT_GT(d, 0.5 * e);
  }
}

TEST(Experiments, CoercivityHoldsForPositivePotential) {
  const Grid g = Grid::make(3, 3.0, 16);
  const Potential v = potential_factory(g, {{"family", "inverse_poly"}, {"c", 1.0}, {"sigma", 2.0}});
  const SchrodingerOp op(v, chebyshev_strategy());
  CoercivityOptions opt;
  opt.random_probes = 50;
  const CoercivityResult r = coercivity_check(op, opt);
  EXPECT_EQ(r.kato_negative, 0.0);
  EXPECT_DOUBLE_EQ(r.constant, 1.0);
  EXPECT_TRUE(r.hypothesis);
  EXPECT_EQ(r.violations, 0);
  EXPECT_GE(r.ratios.min, 1.0);
}

TEST(Experiments, CoercivityForShallowWell) {
  const Grid g = Grid::make(3, 3.0, 16);
  const Potential v = potential_factory(g, {{"family", "gaussian_well"}, {"depth", -2.0}, {"width", 0.6}});
  const SchrodingerOp op(v, chebyshev_strategy());
  CoercivityOptions opt;
  opt.random_probes = 50;
  const CoercivityResult r = coercivity_check(op, opt);
  EXPECT_LT(r.kato_negative, 4.0 * kPi);
  EXPECT_EQ(r.violations, 0);
  EXPECT_GE(r.ground_ratio, r.constant - 1e-9);
}

TEST(Experiments, ResonanceAbsentForZeroAndShallow) {
  const Grid g = Grid::make(3, 2.0, 8);
  const ResonanceResult z = resonance_check(Potential::zero(g), 1e-3);
  EXPECT_FALSE(z.resonant);
  EXPECT_FALSE(z.supercritical);
  EXPECT_NEAR(z.top, 0.0, 1e-12);
  const Potential shallow = potential_factory(g, {{"family", "gaussian_well"}, {"depth", -1.0}, {"width", 0.5}});
  const ResonanceResult s = resonance_check(shallow, 1e-3);
  EXPECT_FALSE(s.supercritical);
  EXPECT_LT(s.top, 1.0);
  EXPECT_GT(s.lowest_energy, 0.0);
}

TEST(Experiments, ResonanceForDeepWell) {
  const Grid g = Grid::make(3, 2.0, 8);
  const Potential deep = potential_factory(g, {{"family", "gaussian_well"}, {"depth", -200.0}, {"width", 0.5}});
  const ResonanceResult r = resonance_check(deep, 1e-3);
  EXPECT_TRUE(r.supercritical || r.resonant);
  EXPECT_LT(r.lowest_energy, 0.0);
}

TEST(Experiments, LippmannSchwingerZeroPotential) {
  const Grid g = Grid::make(3, 2.0, 16);
  LippmannSchwingerConfig cfg;
  const LippmannSchwingerResult r = lippmann_schwinger_solve(Potential::zero(g), {1.0, 0.0, 0.0}, cfg);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 1);
  EXPECT_EQ(r.scattered, 0.0);
  EXPECT_NEAR(std::abs(r.e[0]), 1.0, 1e-14);
}

TEST(Experiments, LippmannSchwingerWeakPotentialSatisfiesEquation) {
  const Grid g = Grid::make(3, 3.0, 16);
  const Potential v = potential_factory(g, {{"family", "gaussian_well"}, {"depth", -0.5}, {"width", 0.5}});
  LippmannSchwingerConfig cfg;
  cfg.tol = 1e-10;
  const LippmannSchwingerResult r = lippmann_schwinger_solve(v, {1.0, 0.0, 0.0}, cfg);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.residual, 1e-10);
  EXPECT_GT(r.scattered, 0.0);
  // Residuals of a contraction decrease.
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_LT(r.history[i], r.history[i - 1]);
  EXPECT_THROW(lippmann_schwinger_solve(Potential::zero(Grid::make(2, 1.0, 8)), {1, 0, 0}, cfg),
               std::invalid_argument);
}

TEST(Experiments, NormEquivalenceIsOneForZeroPotential) {
  const Grid g = Grid::make(1, 4.0, 64);
  const SchrodingerOp op(Potential::zero(g));
  const ProbeSet probes = mean_zero_probes(g, 4.0, 16, 3);
  const RatioReport r = norm_equivalence_ratio(op, 1.0, 2.0, probes);
  EXPECT_NEAR(r.min, 1.0, 1e-10);
  EXPECT_NEAR(r.max, 1.0, 1e-10);
}

TEST(Experiments, UnknownKindAndBadParamsAreConfigErrors) {
  EXPECT_THROW(run_experiment(spec_for("nope", nullptr, nullptr)), ConfigError);
  try {
    run_experiment(spec_for("difference_decay", {{"dim", 1}, {"L", 4.0}, {"n", 12}}, nullptr));
    FAIL() << "n = 12 accepted";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("grid.n"), std::string::npos) << e.what();
  }
  try {
    run_experiment(spec_for("difference_decay", {{"dim", 1}, {"L", 8.0}, {"n", 256}}, nullptr,
                            {{"N_list", {8, 12, 16, 32}}}));
    FAIL() << "non-dyadic N accepted";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("N_list"), std::string::npos) << e.what();
  }
}

TEST(Experiments, OutputFilesAreWritten) {
  const ExperimentOutput out = run_experiment(
      spec_for("free_degeneracy", {{"dim", 1}, {"L", 4.0}, {"n", 64}}, nullptr));
  const auto dir = std::filesystem::temp_directory_path() / "kato_exp_out";
  std::filesystem::remove_all(dir);
  write_experiment_output(out, dir.string());
  EXPECT_TRUE(std::filesystem::exists(dir / "verdict.json"));
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace kato
