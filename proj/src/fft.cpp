#include "kato/fft.hpp"

#include <algorithm>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace kato {

namespace {

// Eigen::FFT caches plans per length and is not safe for concurrent use.
Eigen::FFT<double>& thread_fft() {
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::Unscaled);
    return f;
  }();
  return fft;
}

}  // namespace

void fft_in_place(Eigen::VectorXcd& data, int dim, int n, bool inverse) {
  auto& fft = thread_fft();
  thread_local std::vector<Complex> line;
  thread_local std::vector<Complex> out;
  line.resize(static_cast<std::size_t>(n));
  out.resize(static_cast<std::size_t>(n));
  Complex* d = data.data();
  const Eigen::Index total = data.size();
  auto transform = [&](Complex* dst, const Complex* src) {
    if (inverse) {
      fft.inv(dst, src, n);
    } else {
      fft.fwd(dst, src, n);
    }
  };

  Eigen::Index stride = 1;
  for (int axis = dim - 1; axis >= 0; --axis) {
    const Eigen::Index block = stride * n;
    for (Eigen::Index outer = 0; outer < total; outer += block) {
      if (stride == 1) {
        transform(out.data(), d + outer);
        std::copy(out.begin(), out.end(), d + outer);
        continue;
      }
      for (Eigen::Index inner = 0; inner < stride; ++inner) {
        Complex* base = d + outer + inner;
        for (int j = 0; j < n; ++j) line[j] = base[j * stride];
        transform(out.data(), line.data());
        for (int j = 0; j < n; ++j) base[j * stride] = out[j];
      }
    }
    stride = block;
  }
}

Eigen::VectorXcd forward_transform(const Field& f) {
  const Grid& g = f.grid();
  Eigen::VectorXcd data = f.values();
  fft_in_place(data, g.dim(), g.n(), false);
  data /= static_cast<double>(g.size());
  return data;
}

Field inverse_transform(const Grid& grid, const Eigen::VectorXcd& coeffs) {
  Eigen::VectorXcd data = coeffs;
  fft_in_place(data, grid.dim(), grid.n(), true);
  return Field(grid, std::move(data));
}

}  // namespace kato
