#include "kato/lattice.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "kato/fft.hpp"

namespace kato {

Eigen::VectorXcd multiplier_table(const Grid& grid, const Symbol& m) {
  const auto& kabs = grid.k_abs();
  Eigen::VectorXcd table(kabs.size());
  for (Eigen::Index p = 0; p < kabs.size(); ++p) table[p] = m(kabs[p]);
  return table;
}

Field apply_fourier_table(const Field& f, const Eigen::VectorXcd& table) {
  if (table.size() != f.size()) {
    throw std::invalid_argument("multiplier table size does not match field");
  }
  Eigen::VectorXcd coeffs = forward_transform(f);
  coeffs.array() *= table.array();
  return inverse_transform(f.grid(), coeffs);
}

Field fourier_multiplier(const Field& f, const Symbol& m) {
  return apply_fourier_table(f, multiplier_table(f.grid(), m));
}

namespace {

template <typename Vec>
double lp_impl(const Vec& v, double cell, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const Eigen::ArrayXd a = v.cwiseAbs().array();
  if (std::isinf(p)) return a.size() ? a.maxCoeff() : 0.0;
  if (p == 2.0) return std::sqrt(a.square().sum() * cell);
  return std::pow(a.pow(p).sum() * cell, 1.0 / p);
}

}  // namespace

double lp_norm(const Field& f, double p) {
  return lp_impl(f.values(), f.grid().cell_volume(), p);
}

double lp_norm(const RealField& f, double p) {
  return lp_impl(f.values(), f.grid().cell_volume(), p);
}

double sobolev_norm(const Field& f, double s, bool homogeneous) {
  const Grid& g = f.grid();
  const Eigen::VectorXcd coeffs = forward_transform(f);
  const auto& ksq = g.k_squared();
  double sum = 0.0;
  for (Eigen::Index p = 0; p < coeffs.size(); ++p) {
    double w;
    if (homogeneous) {
      if (ksq[p] == 0.0) continue;
      w = std::pow(ksq[p], s);
    } else {
      w = std::pow(1.0 + ksq[p], s);
    }
    sum += w * std::norm(coeffs[p]);
  }
  return std::sqrt(sum * g.volume());
}

double gradient_norm_squared(const Field& f) {
  const Eigen::VectorXcd coeffs = forward_transform(f);
  const auto& ksq = f.grid().k_squared();
  double sum = 0.0;
  for (Eigen::Index p = 0; p < coeffs.size(); ++p) sum += ksq[p] * std::norm(coeffs[p]);
  return sum * f.grid().volume();
}

}  // namespace kato
