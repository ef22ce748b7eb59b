#include "kato/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kato {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

std::complex<double> cube_average_singular(
    double h, const std::function<std::complex<double>(double)>& f, int order) {
  const GaussRule g = gauss_legendre(order);
  // Pyramid over the face x = h/2: z = t (h/2) (1, a, b), a, b in [-1, 1].
  std::complex<double> total = 0.0;
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < order; ++j) {
      const double a = g.nodes[i];
      const double b = g.nodes[j];
      const double rho = std::sqrt(1.0 + a * a + b * b);
      std::complex<double> radial = 0.0;
      for (int k = 0; k < order; ++k) {
        const double t = 0.5 * (g.nodes[k] + 1.0);
        radial += 0.5 * g.weights[k] * t * f(t * h * rho / 2.0);
      }
      total += g.weights[i] * g.weights[j] * radial / rho;
    }
  }
  return 6.0 / (4.0 * h) * total;
}

}  // namespace kato
