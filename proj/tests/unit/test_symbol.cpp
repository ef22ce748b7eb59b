#include <cmath>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "kato/lattice.hpp"
#include "kato/symbol.hpp"

namespace kato {
namespace {

TEST(SmoothStep, EndpointsAndSymmetry) {
  EXPECT_EQ(smooth_step(0.0), 0.0);
  EXPECT_EQ(smooth_step(-1.0), 0.0);
  EXPECT_EQ(smooth_step(1.0), 1.0);
  EXPECT_EQ(smooth_step(3.0), 1.0);
  EXPECT_DOUBLE_EQ(smooth_step(0.5), 0.5);
  testing::Gen gen(1);
  for (int i = 0; i < 200; ++i) {
    const double t = gen.uniform(0.0, 1.0);
    EXPECT_NEAR(smooth_step(t) + smooth_step(1.0 - t), 1.0, 1e-15);
  }
}

TEST(DyadicProfile, SupportAndValues) {
  EXPECT_EQ(dyadic_profile(0.49), 0.0);
  EXPECT_EQ(dyadic_profile(2.01), 0.0);
  EXPECT_EQ(dyadic_profile(1.0), 1.0);
  // chi_2 vanishes at lambda = 1 (low_cutoff(1/2) - low_cutoff(1) = 0) and is
  // strictly between 0 and 1 on the ramp.
  const Symbol chi2 = dyadic_bump(2.0);
  EXPECT_NEAR(std::abs(chi2(1.0)), 0.0, 1e-15);
  const double v = chi2(1.5).real();
  EXPECT_GT(v, 0.0);
  EXPECT_LT(v, 1.0);
}

// Property: the telescoping partition sums to one at every lambda covered.
TEST(DyadicProfile, PartitionOfUnity) {
  testing::Gen gen(2);
  const DyadicRange range = dyadic_range(0.3, 500.0);
  for (int i = 0; i < 500; ++i) {
    const double lambda = std::exp(gen.uniform(std::log(0.3), std::log(500.0)));
    double sum = 0.0;
    for (double N : range.values()) sum += dyadic_bump(N)(lambda).real();
    EXPECT_NEAR(sum, 1.0, 1e-14) << "lambda " << lambda;
  }
}

TEST(DyadicProfile, GridPartitionCheck) {
  testing::Gen gen(3);
  for (int i = 0; i < 10; ++i) {
    EXPECT_LT(partition_check(gen.grid()), 1e-14);
  }
}

TEST(ISymbol, DyadicSamples) {
  const double s = 0.9;
  EXPECT_EQ(i_weight(4.0, 8.0, s), 1.0);
  EXPECT_EQ(i_weight(8.0, 8.0, s), 1.0);
  EXPECT_DOUBLE_EQ(i_weight(32.0, 8.0, s), std::pow(8.0 / 32.0, 1.0 - s));
  const Symbol m = i_symbol(8.0, s);
  EXPECT_NEAR(m(0.0).real(), 1.0, 1e-15);
  EXPECT_NEAR(m(3.0).real(), 1.0, 1e-14);
  for (double M : {16.0, 32.0, 64.0, 128.0}) {
    EXPECT_NEAR(m(M).real(), std::pow(8.0 / M, 1.0 - s), 1e-14) << M;
  }
}

TEST(ISymbol, MonotoneNonincreasing) {
  const Symbol m = i_symbol(4.0, 0.7);
  double prev = m(0.0).real();
  for (double lambda = 0.0; lambda < 300.0; lambda += 0.37) {
    const double v = m(lambda).real();
    EXPECT_LE(v, prev + 1e-14);
    prev = v;
  }
}

// Property: the q-symbols resolve the identity, sum_M qchi_M = 1.
TEST(QSymbol, SumToOne) {
  testing::Gen gen(4);
  const double N = 8.0;
  const double s = 0.9;
  const DyadicRange range = dyadic_range(0.4, 400.0);
  std::vector<Symbol> q;
  for (double M : range.values()) q.push_back(q_symbol(M, N, s));
  for (int i = 0; i < 300; ++i) {
    const double lambda = gen.uniform(0.4, 400.0);
    double sum = 0.0;
    for (const Symbol& qm : q) sum += qm(lambda).real();
    EXPECT_NEAR(sum, 1.0, 1e-13) << lambda;
  }
}

TEST(PropagatorSymbol, EnergyForm) {
  const Symbol p = propagator_symbol(0.3);
  EXPECT_TRUE(p.has_energy_form());
  EXPECT_NEAR(std::abs(p(2.0) - std::exp(Complex(0.0, -1.2))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p.at_energy(-5.0) - std::exp(Complex(0.0, 1.5))), 0.0, 1e-15);
  EXPECT_FALSE(p.real_valued());
}

TEST(PowerSymbol, ZeroModeAndEvenPowers) {
  EXPECT_EQ(power_symbol(0.5)(0.0), Complex(0.0));
  EXPECT_NEAR(power_symbol(0.5)(4.0).real(), 2.0, 1e-15);
  const Symbol sq = power_symbol(2.0);
  EXPECT_TRUE(sq.has_energy_form());
  EXPECT_NEAR(sq.at_energy(-3.0).real(), -3.0, 1e-15);
  EXPECT_FALSE(power_symbol(0.5).has_energy_form());
}

TEST(SmoothBump, Plateau) {
  const Symbol b = smooth_bump(2.0, 6.0);
  EXPECT_EQ(b(1.9).real(), 0.0);
  EXPECT_EQ(b(6.1).real(), 0.0);
  EXPECT_NEAR(b(3.5).real(), 1.0, 1e-15);
  EXPECT_NEAR(b(4.5).real(), 1.0, 1e-15);
  EXPECT_GT(b(2.5).real(), 0.0);
  EXPECT_LT(b(2.5).real(), 1.0);
}

TEST(Dyadic, Range) {
  EXPECT_TRUE(is_dyadic(0.25));
  EXPECT_TRUE(is_dyadic(64.0));
  EXPECT_FALSE(is_dyadic(12.0));
  EXPECT_FALSE(is_dyadic(0.0));
  const DyadicRange r = dyadic_range(3.0, 100.0);
  EXPECT_TRUE(r.contains(2.0));
  EXPECT_TRUE(r.contains(128.0));
  EXPECT_FALSE(r.contains(256.0));
}

TEST(FourierMultiplier, IdentityAndLinearity) {
  testing::Gen gen(6);
  for (int trial = 0; trial < 10; ++trial) {
    const Grid g = gen.grid(3, 2048);
    const Field f = gen.field(g);
    const Field h = gen.field(g);
    EXPECT_LT(testing::rel_diff(fourier_multiplier(f, identity_symbol()), f), 1e-13);
    const Symbol m = dyadic_bump(4.0);
    const Complex a(0.3, -1.1);
    const Field lhs = fourier_multiplier(f + a * h, m);
    const Field rhs = fourier_multiplier(f, m) + a * fourier_multiplier(h, m);
    EXPECT_LT(testing::rel_diff(lhs, rhs), 1e-13);
  }
}

TEST(FourierMultiplier, PlaneWaveEigenfunction) {
  const Grid g = Grid::make(2, 2.0, 32);
  const std::array<int, 3> mode{3, 4, 0};
  const Field f = plane_wave(g, mode);
  const double kabs = 5.0 * std::numbers::pi / 2.0;
  const Symbol m = i_symbol(2.0, 0.8);
  const Field out = fourier_multiplier(f, m);
  EXPECT_LT(testing::rel_diff(out, m(kabs) * f), 1e-13);
}

TEST(Norms, LpAndSobolev) {
  const Grid g = Grid::make(1, std::numbers::pi, 64);
  const Field f = plane_wave(g, {2, 0, 0});
  EXPECT_NEAR(lp_norm(f, 2.0), std::sqrt(2.0 * std::numbers::pi), 1e-12);
  EXPECT_NEAR(lp_norm(f, INFINITY), 1.0, 1e-14);
  EXPECT_NEAR(sobolev_norm(f, 1.0, true), 2.0 * std::sqrt(2.0 * std::numbers::pi), 1e-12);
  EXPECT_NEAR(gradient_norm_squared(f), 8.0 * std::numbers::pi, 1e-11);
  Field c(g);
  c.values().setConstant(1.0);
  EXPECT_NEAR(sobolev_norm(c, 1.0, true), 0.0, 1e-14);
  EXPECT_NEAR(sobolev_norm(c, 1.0, false), std::sqrt(2.0 * std::numbers::pi), 1e-12);
}

}  // namespace
}  // namespace kato
