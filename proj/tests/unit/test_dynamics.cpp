#include <cmath>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "kato/dynamics.hpp"
#include "kato/experiments.hpp"

namespace kato {
namespace {

using nlohmann::json;

StrategyConfig chebyshev_strategy() {
  StrategyConfig s;
  s.kind = Strategy::chebyshev;
  return s;
}

Field smooth_datum(const Grid& g, double amplitude) {
  return amplitude * power_law_datum(g, 3.0, 17, 0.0);
}

TEST(Dynamics, MassConservedByEachSubflow) {
  const Grid g = Grid::make(2, 3.0, 32);
  const Potential v = potential_factory(g, {{"family", "gaussian_well"}, {"depth", -2.0}, {"width", 0.7}});
  const SchrodingerOp op(v, chebyshev_strategy());
  const Field u0 = smooth_datum(g, 2.0);
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_final = 0.2;
  cfg.snapshot_stride = 20;
  cfg.shadow_steps = 0;
  const DiagnosticSeries d = evolve(op, u0, cfg);
  EXPECT_EQ(d.steps, 200);
  EXPECT_EQ(d.times.size(), 11u);
  EXPECT_LT(d.mass_drift, 1e-12);
}

TEST(Dynamics, LinearFlowMatchesPropagator) {
  const Grid g = Grid::make(1, 4.0, 64);
  const Potential v = potential_factory(g, {{"family", "inverse_poly"}, {"c", 1.0}, {"sigma", 2.0}});
  const SchrodingerOp op(v);
  const Field u0 = smooth_datum(g, 1.0);
  const StrangStepper stepper(op, 0.01, 0.0);
  const Field a = stepper.advance(u0, 30);
  const Field b = linear_propagate(op, u0, 0.3);
  EXPECT_LT(testing::rel_diff(a, b), 1e-11);
}

TEST(Dynamics, PropagatorGroupLaw) {
  const Grid g = Grid::make(2, 2.0, 16);
  const Potential v = potential_factory(g, {{"family", "gaussian_well"}, {"depth", -1.0}, {"width", 0.5}});
  const SchrodingerOp op(v, chebyshev_strategy());
  testing::Gen gen(50);
  const Field u = gen.field(g);
  const Field a = linear_propagate(op, linear_propagate(op, u, 0.013), 0.021);
  const Field b = linear_propagate(op, u, 0.034);
  EXPECT_LT(testing::rel_diff(a, b), 1e-9);
}

TEST(Dynamics, TimeReversible) {
  const Grid g = Grid::make(1, 3.0, 64);
  const SchrodingerOp op(potential_factory(g, {{"family", "constant"}, {"value", 0.5}}));
  const Field u0 = smooth_datum(g, 3.0);
  const Field u1 = strang_step(op, u0, 1e-2);
  // Stepping the conjugate forward undoes the step: S(-dt) = conj S(dt) conj.
  Field c(g);
  c.values() = u1.values().conjugate();
  Field back = strang_step(op, c, 1e-2);
  back.values() = back.values().conjugate();
  EXPECT_LT(testing::rel_diff(back, u0), 1e-8);
}

TEST(Dynamics, EnergyDriftScalesWithDtSquared) {
  const Grid g = Grid::make(1, 4.0, 64);
  const Potential v = potential_factory(g, {{"family", "inverse_poly"}, {"c", 1.0}, {"sigma", 2.0}});
  const SchrodingerOp op(v);
  const Field u0 = smooth_datum(g, 4.0);
  const HalvingStudy study = dt_halving(op, u0, 4e-3, 0.4, 2, 1.0);
  ASSERT_EQ(study.energy_drift.size(), 2u);
  EXPECT_NEAR(study.ratio, 4.0, 1.2) << study.energy_drift[0] << " " << study.energy_drift[1];
  for (double m : study.mass_drift) EXPECT_LT(m, 1e-12);
}

TEST(Dynamics, ShadowFloorScalesWithDtSquared) {
  const Grid g = Grid::make(1, 4.0, 64);
  const Potential v = potential_factory(g, {{"family", "inverse_poly"}, {"c", 1.0}, {"sigma", 2.0}});
  const SchrodingerOp op(v);
  const Field u0 = smooth_datum(g, 4.0);
  double floor[2];
  for (int j = 0; j < 2; ++j) {
    EvolutionConfig cfg;
    cfg.dt = 4e-3 / (1 << j);
    cfg.t_final = 0.4;
    cfg.snapshot_stride = 10 << j;
    cfg.i_scales = {2, 4};
    cfg.s = 0.9;
    cfg.shadow_steps = 32;
    floor[j] = evolve(op, u0, cfg).splitting_floor;
  }
  EXPECT_NEAR(floor[0] / floor[1], 4.0, 1.2) << floor[0] << " " << floor[1];
}

TEST(Dynamics, SmallDataFollowsFreeFlow) {
  const Grid g = Grid::make(1, 4.0, 64);
  const SchrodingerOp op(Potential::zero(g));
  const Field shape = smooth_datum(g, 1.0);
  std::vector<double> amp{0.05, 0.1, 0.2};
  std::vector<double> err;
  for (double a : amp) {
    const Field u0 = a * shape;
    const Field u = StrangStepper(op, 1e-3, 1.0).advance(u0, 200);
    const Field free = linear_propagate(op, u0, 0.2);
    err.push_back(lp_norm(u - free, 2.0));
  }
  // The deviation is cubic in the amplitude.
  const LineFit fit = fit_loglog(amp, err);
  EXPECT_NEAR(fit.slope, 3.0, 0.05);
}

TEST(Dynamics, IEnergyEqualsEnergyWhenBandLimited) {
  const Grid g = Grid::make(1, 4.0, 64);
  const SchrodingerOp op(Potential::zero(g));
  const Field u = power_law_datum(g, 1.0, 3, 3.0);
  // I_N acts as the identity below N.
  EXPECT_NEAR(i_energy(op, u, 8.0, 0.9), energy(op, u), 1e-10 * energy(op, u));
}

TEST(Dynamics, NonFiniteStateStops) {
  const Grid g = Grid::make(1, 1.0, 16);
  const SchrodingerOp op(Potential::zero(g));
  Field u(g);
  u[3] = Complex(std::numeric_limits<double>::infinity(), 0.0);
  EXPECT_THROW(strang_step(op, u, 1e-3), NonFiniteState);
}

TEST(Dynamics, EvolveRejectsBadConfig) {
  const Grid g = Grid::make(1, 1.0, 16);
  const SchrodingerOp op(Potential::zero(g));
  EvolutionConfig cfg;
  cfg.dt = 0.0;
  EXPECT_THROW(evolve(op, Field(g), cfg), std::invalid_argument);
  cfg.dt = 1e-3;
  cfg.snapshot_stride = 0;
  EXPECT_THROW(evolve(op, Field(g), cfg), std::invalid_argument);
}

// Property: rescaling by r and back is the identity, and u_r(x) = u(x / r) / r
// holds exactly at the original lattice points.
TEST(Dynamics, RescaleRoundTrip) {
  testing::Gen gen(51);
  for (int trial = 0; trial < 5; ++trial) {
    const Grid g = Grid::make(gen.integer(1, 2), gen.uniform(1.0, 3.0), 16);
    const Field u = power_law_datum(g, 2.0, 5 + trial, 0.0);
    const Field ur = rescale_solution(u, 2.0);
    EXPECT_EQ(ur.grid().n(), 32);
    EXPECT_DOUBLE_EQ(ur.grid().half_period(), 2.0 * g.half_period());
    const Field back = rescale_solution(ur, 2.0, ScaleDirection::inverse);
    EXPECT_LT(testing::rel_diff(back, u), 1e-13);
    // Lattice points of g sit at even indices of the rescaled lattice.
    const std::size_t p = g.flatten({4, g.dim() > 1 ? 6 : 0, 0});
    const auto idx = g.unflatten(p);
    const std::size_t q = ur.grid().flatten({2 * idx[0], 2 * idx[1], 0});
    EXPECT_NEAR(std::abs(ur[static_cast<Eigen::Index>(q)] - u[static_cast<Eigen::Index>(p)] / 2.0),
                0.0, 1e-13);
  }
}

}  // namespace
}  // namespace kato
