#include <cmath>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "kato/chebyshev.hpp"

namespace kato {
namespace {

TEST(Chebyshev, PolynomialIsExact) {
  // x^3 - 2x on [-1, 3] is reproduced by any degree >= 3.
  auto g = [](double x) { return Complex(x * x * x - 2.0 * x); };
  const ChebyshevSeries s = chebyshev_fit(g, -1.0, 3.0, 5);
  EXPECT_LT(s.tail, 1e-13);
  EXPECT_LT(std::abs(s.coeffs[4]) + std::abs(s.coeffs[5]), 1e-13);
  for (double x = -1.0; x <= 3.0; x += 0.1) {
    EXPECT_NEAR(std::abs(s(x) - g(x)), 0.0, 1e-12);
  }
}

TEST(Chebyshev, AutoMeetsTolerance) {
  testing::Gen gen(20);
  for (int trial = 0; trial < 10; ++trial) {
    const double t = gen.uniform(0.1, 3.0);
    auto g = [t](double e) { return std::exp(Complex(0.0, -t * e)); };
    const double lo = gen.uniform(-5.0, 0.0);
    const double hi = gen.uniform(10.0, 200.0);
    const ChebyshevSeries s = chebyshev_auto(g, lo, hi, 8, 1e-10, 1 << 14);
    EXPECT_LE(s.tail, 1e-10);
    double err = 0.0;
    for (int i = 0; i <= 500; ++i) {
      const double e = lo + (hi - lo) * i / 500.0;
      err = std::max(err, std::abs(s(e) - g(e)));
    }
    // The certified tail bounds the uniform error of the kept series up to
    // the aliasing of the interpolant, which is of the same order.
    EXPECT_LT(err, 1e-9) << "t " << t << " degree " << s.degree();
  }
}

TEST(Chebyshev, AutoTruncatesToMinimalDegree) {
  auto g = [](double x) { return Complex(std::cos(3.0 * x)); };
  const ChebyshevSeries s = chebyshev_auto(g, -1.0, 1.0, 64, 1e-12, 1024);
  // The same fit at one degree less must violate the certificate.
  const ChebyshevSeries lower = chebyshev_fit(g, -1.0, 1.0, s.degree() - 1);
  double scale = 1.0;
  for (const Complex& c : lower.coeffs) scale = std::max(scale, std::abs(c));
  EXPECT_GT(lower.tail, 1e-12 * scale * 0.5);
  EXPECT_LT(s.degree(), 64);
}

TEST(Chebyshev, IncreaseDegreeError) {
  auto g = [](double x) { return Complex(std::abs(x)); };
  EXPECT_THROW(chebyshev_auto(g, -1.0, 1.0, 8, 1e-14, 64), IncreaseDegreeError);
}

TEST(Chebyshev, ApplyMatchesScalarOnDiagonalOperator) {
  // For a diagonal "H" the matrix function acts entrywise.
  const Grid grid = Grid::make(1, 1.0, 64);
  testing::Gen gen(21);
  Eigen::VectorXd diag(64);
  for (int i = 0; i < 64; ++i) diag[i] = gen.uniform(-2.0, 30.0);
  auto apply_h = [&](const Field& f) {
    Field out(f.grid());
    out.values() = diag.cwiseProduct(f.values());
    return out;
  };
  auto g = [](double e) { return Complex(std::exp(-0.2 * e), std::sin(e)); };
  const ChebyshevSeries s = chebyshev_auto(g, -2.0, 30.0, 8, 1e-12, 4096);
  const Field f = gen.field(grid);
  const Field out = chebyshev_apply(s, apply_h, f);
  for (int i = 0; i < 64; ++i) {
    EXPECT_NEAR(std::abs(out[i] - g(diag[i]) * f[i]), 0.0, 1e-10 * std::abs(f[i]) + 1e-12);
  }
}

TEST(Chebyshev, RejectsEmptyInterval) {
  auto g = [](double) { return Complex(1.0); };
  EXPECT_THROW(chebyshev_fit(g, 1.0, 1.0, 4), std::invalid_argument);
  EXPECT_THROW(chebyshev_auto(g, 2.0, 1.0, 4, 1e-10, 16), std::invalid_argument);
}

}  // namespace
}  // namespace kato
