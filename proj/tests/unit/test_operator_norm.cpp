#include <cmath>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "kato/fft.hpp"
#include "kato/operator_norm.hpp"

namespace kato {
namespace {

TEST(OperatorNorm, ExactNormOfMultiplierIsMaxSymbol) {
  testing::Gen gen(40);
  for (int trial = 0; trial < 5; ++trial) {
    const Grid g = gen.grid(2, 512);
    const Symbol m = i_symbol(2.0, gen.uniform(0.55, 0.95));
    const Eigen::VectorXcd table = multiplier_table(g, m);
    const double expect = table.cwiseAbs().maxCoeff();
    EXPECT_NEAR(exact_norm_2(fourier_op(g, m), g), expect, 1e-10 * expect);
  }
}

TEST(OperatorNorm, AssembledMatrixOfMultiplierIsCirculant) {
  const Grid g = Grid::make(1, 1.0, 16);
  const Eigen::MatrixXcd a = assemble_operator(fourier_op(g, dyadic_bump(4.0)), g);
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      EXPECT_NEAR(std::abs(a(i, j) - a((i + 1) % 16, (j + 1) % 16)), 0.0, 1e-14);
    }
  }
}

// Property: probes never exceed the exact norm for p = 2.
TEST(OperatorNorm, ProbeBelowExact) {
  testing::Gen gen(41);
  for (int trial = 0; trial < 5; ++trial) {
    const Grid g = gen.grid(2, 256);
    const Potential v(gen.real_field(g, 2.0));
    const SchrodingerOp op(v);
    const LinearOp a = spectral_op(op, propagator_symbol(0.3));
    const LinearOp d = subtract(a, fourier_op(g, propagator_symbol(0.3)));
    const ProbeSet probes = standard_probes(g, 4.0, 20, 7 + trial);
    EXPECT_LE(operator_norm_probe(d, 2.0, probes), exact_norm_2(d, g) * (1.0 + 1e-10));
  }
}

TEST(OperatorNorm, ProbeSetsAreSeedDeterministic) {
  const Grid g = Grid::make(2, 2.0, 16);
  const ProbeSet a = standard_probes(g, 4.0, 24, 99);
  const ProbeSet b = standard_probes(g, 4.0, 24, 99);
  const ProbeSet c = standard_probes(g, 4.0, 24, 100);
  ASSERT_EQ(a.size(), 24u);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.probes[i].values(), b.probes[i].values());
    EXPECT_EQ(a.labels[i], b.labels[i]);
  }
  EXPECT_NE(a.probes[0].values(), c.probes[0].values());
  EXPECT_FALSE(a.descriptor.empty());
}

TEST(OperatorNorm, ClassStreamsAreIndependent) {
  const Grid g = Grid::make(1, 2.0, 64);
  const ProbeSet alone = gaussian_probes(g, 4, 5);
  const ProbeSet mixed = standard_probes(g, 4.0, 16, 5);
  // The gaussian class in the mix draws from the same stream as on its own.
  std::size_t k = 0;
  for (std::size_t i = 0; i < mixed.size() && k < alone.size(); ++i) {
    if (mixed.labels[i] == alone.labels[0]) {
      EXPECT_EQ(mixed.probes[i].values(), alone.probes[k].values());
      ++k;
    }
  }
  EXPECT_GT(k, 0u);
}

TEST(OperatorNorm, BandLimitedFieldSupport) {
  testing::Gen gen(42);
  const Grid g = Grid::make(2, 3.0, 32);
  const Field f = band_limited_field(g, 4.0, 8.0, gen.rng());
  const Eigen::VectorXcd c = forward_transform(f);
  for (Eigen::Index p = 0; p < c.size(); ++p) {
    const double k = g.k_abs()[p];
    if (k < 4.0 - 1e-12 || k > 8.0 + 1e-12) EXPECT_LT(std::abs(c[p]), 1e-13);
  }
}

TEST(OperatorNorm, IdentityHasUnitNorm) {
  const Grid g = Grid::make(1, 1.0, 32);
  EXPECT_NEAR(exact_norm_2(identity_op(), g), 1.0, 1e-12);
  const ProbeSet probes = gaussian_probes(g, 8, 1);
  for (double p : {1.5, 2.0, 4.0}) {
    EXPECT_NEAR(operator_norm_probe(identity_op(), p, probes), 1.0, 1e-14);
  }
  EXPECT_THROW(operator_norm_probe(identity_op(), 2.0, ProbeSet{}), std::invalid_argument);
}

}  // namespace
}  // namespace kato
