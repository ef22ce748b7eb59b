#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Core>

#include "kato/grid.hpp"

namespace kato {

using Complex = std::complex<double>;

/// A lattice function with values of type Scalar (double or complex).
///
/// Value type: copying copies the samples; the grid tables are shared.
template <typename Scalar>
class BasicField {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit BasicField(Grid grid)
      : grid_(std::move(grid)),
        values_(Vector::Zero(static_cast<Eigen::Index>(grid_.size()))) {}

  BasicField(Grid grid, Vector values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != static_cast<Eigen::Index>(grid_.size())) {
      throw std::invalid_argument("field size does not match grid");
    }
  }

  const Grid& grid() const { return grid_; }
  const Vector& values() const { return values_; }
  Vector& values() { return values_; }
  Eigen::Index size() const { return values_.size(); }

  Scalar operator[](Eigen::Index i) const { return values_[i]; }
  Scalar& operator[](Eigen::Index i) { return values_[i]; }

  bool all_finite() const { return values_.allFinite(); }

  BasicField& operator+=(const BasicField& o) {
    require_same_grid(grid_, o.grid_);
    values_ += o.values_;
    return *this;
  }
  BasicField& operator-=(const BasicField& o) {
    require_same_grid(grid_, o.grid_);
    values_ -= o.values_;
    return *this;
  }
  BasicField& operator*=(Scalar c) {
    values_ *= c;
    return *this;
  }

  friend BasicField operator+(BasicField a, const BasicField& b) {
    a += b;
    return a;
  }
  friend BasicField operator-(BasicField a, const BasicField& b) {
    a -= b;
    return a;
  }
  friend BasicField operator*(Scalar c, BasicField a) {
    a *= c;
    return a;
  }
  friend BasicField operator*(BasicField a, Scalar c) {
    a *= c;
    return a;
  }

 private:
  Grid grid_;
  Vector values_;
};

using Field = BasicField<Complex>;
using RealField = BasicField<double>;

/// Pointwise product v * f (a real multiplication operator acting on f).
Field multiply(const RealField& v, const Field& f);

Field to_complex(const RealField& f);
/// Real part; throws if any imaginary part exceeds `tol` times max |f|.
RealField real_part(const Field& f, double tol = 1e-12);

/// Sample g(x) at every lattice point.
template <typename Fn>
Field sample(const Grid& grid, Fn&& g) {
  Field f(grid);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    f[static_cast<Eigen::Index>(p)] = Complex(g(grid.position(p)));
  }
  return f;
}

template <typename Fn>
RealField sample_real(const Grid& grid, Fn&& g) {
  RealField f(grid);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    f[static_cast<Eigen::Index>(p)] = g(grid.position(p));
  }
  return f;
}

/// amplitude * exp(i k0 . x) with k0 = (pi/L) * mode (integer mode vector).
Field plane_wave(const Grid& grid, const std::array<int, 3>& mode,
                 Complex amplitude = 1.0);

/// <f, g> = sum f * conj(g) * h^dim.
Complex inner(const Field& f, const Field& g);

/// Zero-mean projection (removes the k = 0 Fourier mode).
Field remove_mean(const Field& f);

}  // namespace kato
