#pragma once

#include <array>
#include <cstddef>
#include <memory>

#include <Eigen/Core>

namespace kato {

/// Default cap on the total number of lattice points, n^dim.
inline constexpr std::size_t kDefaultPointCap = std::size_t{1} << 21;

/// Periodic lattice on the torus [-L, L)^dim with n points per axis.
///
/// Points are stored row-major over axes (the last axis is contiguous).
/// Wavenumbers follow FFT order: index j on an axis carries
/// k = (pi / L) * (j < n/2 ? j : j - n).  Grids are cheap to copy; the
/// per-point wavenumber tables are shared between copies.
class Grid {
 public:
  /// Throws std::invalid_argument on dim outside {1,2,3}, n not a power of
  /// two or below 8, L <= 0, or n^dim above `point_cap`.
  static Grid make(int dim, double half_period, int n,
                   std::size_t point_cap = kDefaultPointCap);

  int dim() const { return dim_; }
  double half_period() const { return half_period_; }
  int n() const { return n_; }
  double spacing() const { return 2.0 * half_period_ / n_; }
  std::size_t size() const { return size_; }

  /// h^dim, the quadrature weight of one lattice cell.
  double cell_volume() const;
  /// (2L)^dim.
  double volume() const;

  double coordinate(int j) const { return -half_period_ + j * spacing(); }
  double wavenumber(int j) const;
  /// Largest |k_j| along one axis, (pi / L) * n / 2.
  double axis_k_max() const;
  /// Smallest nonzero |k|, pi / L.
  double k_min() const;
  /// Largest |k| over the lattice, sqrt(dim) * axis_k_max().
  double k_max() const;

  /// Axis indices of a flat index (unused trailing entries are zero).
  std::array<int, 3> unflatten(std::size_t flat) const;
  std::size_t flatten(const std::array<int, 3>& idx) const;
  /// Physical position of a lattice point.
  std::array<double, 3> position(std::size_t flat) const;
  /// |x| of a lattice point.
  double radius(std::size_t flat) const;

  /// |k| and |k|^2 for every lattice point, in FFT order.
  const Eigen::VectorXd& k_abs() const { return tables_->k_abs; }
  const Eigen::VectorXd& k_squared() const { return tables_->k_sq; }
  /// Per-axis wavenumber components, one column per axis.
  const Eigen::MatrixXd& k_components() const { return tables_->k_comp; }

  bool operator==(const Grid& other) const {
    return dim_ == other.dim_ && n_ == other.n_ &&
           half_period_ == other.half_period_;
  }
  bool operator!=(const Grid& other) const { return !(*this == other); }

 private:
  struct Tables {
    Eigen::VectorXd k_abs;
    Eigen::VectorXd k_sq;
    Eigen::MatrixXd k_comp;
  };

  Grid() = default;

  int dim_ = 1;
  double half_period_ = 1.0;
  int n_ = 8;
  std::size_t size_ = 8;
  std::shared_ptr<const Tables> tables_;
};

/// Throws std::invalid_argument("grid mismatch") unless a == b.
void require_same_grid(const Grid& a, const Grid& b);

bool is_power_of_two(long long v);

}  // namespace kato
