#include "kato/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kato {

bool is_power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

Grid Grid::make(int dim, double half_period, int n, std::size_t point_cap) {
  if (dim < 1 || dim > 3) {
    throw std::invalid_argument("grid.dim must be 1, 2 or 3, got " +
                                std::to_string(dim));
  }
  if (!(half_period > 0.0) || !std::isfinite(half_period)) {
    throw std::invalid_argument("grid.L must be positive and finite");
  }
  if (n < 8 || !is_power_of_two(n)) {
    throw std::invalid_argument("grid.n must be a power of two >= 8, got " +
                                std::to_string(n));
  }
  std::size_t size = 1;
  for (int a = 0; a < dim; ++a) size *= static_cast<std::size_t>(n);
  if (size > point_cap) {
    throw std::invalid_argument("grid.n: n^dim = " + std::to_string(size) +
                                " exceeds the point cap " +
                                std::to_string(point_cap));
  }

  Grid g;
  g.dim_ = dim;
  g.half_period_ = half_period;
  g.n_ = n;
  g.size_ = size;

  auto tables = std::make_shared<Tables>();
  tables->k_abs.resize(static_cast<Eigen::Index>(size));
  tables->k_sq.resize(static_cast<Eigen::Index>(size));
  tables->k_comp.resize(static_cast<Eigen::Index>(size), dim);
  for (std::size_t p = 0; p < size; ++p) {
    const auto idx = g.unflatten(p);
    double sq = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double k = g.wavenumber(idx[a]);
      tables->k_comp(static_cast<Eigen::Index>(p), a) = k;
      sq += k * k;
    }
    tables->k_sq[static_cast<Eigen::Index>(p)] = sq;
    tables->k_abs[static_cast<Eigen::Index>(p)] = std::sqrt(sq);
  }
  g.tables_ = std::move(tables);
  return g;
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

double Grid::volume() const { return std::pow(2.0 * half_period_, dim_); }

double Grid::wavenumber(int j) const {
  const int m = j < n_ / 2 ? j : j - n_;
  return std::numbers::pi / half_period_ * m;
}

double Grid::axis_k_max() const {
  return std::numbers::pi / half_period_ * (n_ / 2);
}

double Grid::k_min() const { return std::numbers::pi / half_period_; }

double Grid::k_max() const { return std::sqrt(double(dim_)) * axis_k_max(); }

std::array<int, 3> Grid::unflatten(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % static_cast<std::size_t>(n_));
    flat /= static_cast<std::size_t>(n_);
  }
  return idx;
}

std::size_t Grid::flatten(const std::array<int, 3>& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) {
    const int j = ((idx[a] % n_) + n_) % n_;
    flat = flat * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }
  return flat;
}

std::array<double, 3> Grid::position(std::size_t flat) const {
  const auto idx = unflatten(flat);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = coordinate(idx[a]);
  return x;
}

double Grid::radius(std::size_t flat) const {
  const auto x = position(flat);
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (a != b) throw std::invalid_argument("grid mismatch");
}

}  // namespace kato
