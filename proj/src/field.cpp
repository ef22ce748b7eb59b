#include "kato/field.hpp"

#include <numbers>

#include "kato/fft.hpp"

namespace kato {

Field multiply(const RealField& v, const Field& f) {
  require_same_grid(v.grid(), f.grid());
  Field out(f.grid());
  out.values() = f.values().cwiseProduct(v.values().cast<Complex>());
  return out;
}

Field to_complex(const RealField& f) {
  return Field(f.grid(), f.values().cast<Complex>());
}

RealField real_part(const Field& f, double tol) {
  const double scale = f.values().cwiseAbs().maxCoeff();
  const double imag = f.values().imag().cwiseAbs().maxCoeff();
  if (imag > tol * std::max(scale, 1e-300)) {
    throw std::invalid_argument("field is not real within tolerance");
  }
  return RealField(f.grid(), f.values().real());
}

Field plane_wave(const Grid& grid, const std::array<int, 3>& mode,
                 Complex amplitude) {
  const double base = std::numbers::pi / grid.half_period();
  return sample(grid, [&](const std::array<double, 3>& x) {
    double phase = 0.0;
    for (int a = 0; a < grid.dim(); ++a) phase += base * mode[a] * x[a];
    return amplitude * std::polar(1.0, phase);
  });
}

Complex inner(const Field& f, const Field& g) {
  require_same_grid(f.grid(), g.grid());
  // Eigen's dot conjugates the first argument.
  return g.values().dot(f.values()) * f.grid().cell_volume();
}

Field remove_mean(const Field& f) {
  Field out = f;
  out.values().array() -= f.values().mean();
  return out;
}

}  // namespace kato
