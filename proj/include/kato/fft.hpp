#pragma once

#include <Eigen/Core>

#include "kato/field.hpp"

namespace kato {

/// Discrete Fourier coefficients with the 1/n^dim normalization:
///   fhat(k) = n^-dim * sum_x f(x) exp(-i k . (x + L)),
/// in FFT order (see Grid::wavenumber).  With this convention
///   sum |f|^2 h^dim = (2L)^dim * sum |fhat|^2.
Eigen::VectorXcd forward_transform(const Field& f);

/// Inverse of forward_transform.
Field inverse_transform(const Grid& grid, const Eigen::VectorXcd& coeffs);

/// In-place separable FFT over every axis of a row-major array with `dim`
/// axes of length `n`.  Unnormalized in both directions.
void fft_in_place(Eigen::VectorXcd& data, int dim, int n, bool inverse);

}  // namespace kato
