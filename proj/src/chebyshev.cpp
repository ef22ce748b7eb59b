#include "kato/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/FFT>

namespace kato {

Complex ChebyshevSeries::operator()(double energy) const {
  const double x = (energy - center) / radius;
  // Clenshaw.
  Complex b1 = 0.0;
  Complex b2 = 0.0;
  for (int k = degree(); k >= 1; --k) {
    const Complex b0 = 2.0 * x * b1 - b2 + coeffs[k];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + coeffs[0];
}

namespace {

// All M coefficients of the degree M-1 interpolant at the M first-kind nodes.
std::vector<Complex> interpolant_coeffs(const std::function<Complex(double)>& g,
                                        double center, double radius, int m) {
  std::vector<Complex> ext(2 * static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double x = std::cos(std::numbers::pi * (j + 0.5) / m);
    const Complex v = g(center + radius * x);
    ext[j] = v;
    ext[2 * m - 1 - j] = v;
  }
  Eigen::FFT<double> fft;
  std::vector<Complex> spec;
  fft.fwd(spec, ext);
  std::vector<Complex> c(m);
  for (int k = 0; k < m; ++k) {
    const Complex dct = 0.5 * std::polar(1.0, -std::numbers::pi * k / (2.0 * m)) * spec[k];
    c[k] = (k == 0 ? 1.0 : 2.0) * dct / static_cast<double>(m);
  }
  return c;
}

}  // namespace

ChebyshevSeries chebyshev_fit(const std::function<Complex(double)>& g, double lo,
                              double hi, int degree) {
  if (!(hi > lo)) throw std::invalid_argument("chebyshev_fit: need lo < hi");
  if (degree < 0) throw std::invalid_argument("chebyshev_fit: negative degree");
  ChebyshevSeries s;
  s.center = 0.5 * (hi + lo);
  s.radius = 0.5 * (hi - lo);
  const int m = 4 * degree + 4;
  const auto all = interpolant_coeffs(g, s.center, s.radius, m);
  s.coeffs.assign(all.begin(), all.begin() + degree + 1);
  for (int k = degree + 1; k < m; ++k) s.tail += std::abs(all[k]);
  return s;
}

ChebyshevSeries chebyshev_auto(const std::function<Complex(double)>& g, double lo,
                               double hi, int degree, double tol, int max_degree) {
  if (!(hi > lo)) throw std::invalid_argument("chebyshev_auto: need lo < hi");
  const double center = 0.5 * (hi + lo);
  const double radius = 0.5 * (hi - lo);
  int k = std::max(degree, 4);
  for (;;) {
    const int m = 4 * k + 4;
    const auto all = interpolant_coeffs(g, center, radius, m);
    double scale = 1.0;
    for (int j = 0; j <= k; ++j) scale = std::max(scale, std::abs(all[j]));
    // suffix[j] = sum_{i >= j} |c_i|
    std::vector<double> suffix(m + 1, 0.0);
    for (int j = m - 1; j >= 0; --j) suffix[j] = suffix[j + 1] + std::abs(all[j]);
    // Interpolant coefficients carry roundoff of order eps each, so a tail of
    // m terms cannot be resolved below m * eps.
    const double bound = (tol + m * std::numeric_limits<double>::epsilon()) * scale;
    if (suffix[k + 1] <= bound) {
      // Smallest degree whose tail is below tol, or below the observed noise
      // when tol is out of reach. Truncating to the looser bound would apply
      // the same biased polynomial at every time step.
      const double cut = std::max(tol * scale, suffix[k + 1]);
      int best = k;
      while (best > 0 && suffix[best] <= cut) --best;
      ChebyshevSeries s;
      s.center = center;
      s.radius = radius;
      s.coeffs.assign(all.begin(), all.begin() + best + 1);
      s.tail = suffix[best + 1];
      return s;
    }
    if (k >= max_degree) {
      std::ostringstream msg;
      msg << "Chebyshev tail " << suffix[k + 1] << " exceeds tolerance " << bound
          << " at degree " << k << "; increase K beyond " << max_degree;
      throw IncreaseDegreeError(msg.str());
    }
    k = std::min(2 * k, max_degree);
  }
}

Field chebyshev_apply(const ChebyshevSeries& series,
                      const std::function<Field(const Field&)>& apply_h,
                      const Field& f) {
  const double inv_r = 1.0 / series.radius;
  const double c = series.center;
  auto apply_a = [&](const Field& x) {
    Field y = apply_h(x);
    y.values() = (y.values() - c * x.values()) * inv_r;
    return y;
  };
  Field out(f.grid());
  out.values() = series.coeffs[0] * f.values();
  if (series.degree() == 0) return out;
  Field prev = f;
  Field cur = apply_a(f);
  out.values() += series.coeffs[1] * cur.values();
  for (int k = 2; k <= series.degree(); ++k) {
    Field next = apply_a(cur);
    next.values() = 2.0 * next.values() - prev.values();
    out.values() += series.coeffs[k] * next.values();
    prev = std::move(cur);
    cur = std::move(next);
  }
  return out;
}

}  // namespace kato
