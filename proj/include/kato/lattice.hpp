#pragma once

#include <Eigen/Core>

#include "kato/field.hpp"
#include "kato/symbol.hpp"

namespace kato {

/// m(|k|) at every lattice wavenumber, in FFT order.
Eigen::VectorXcd multiplier_table(const Grid& grid, const Symbol& m);

/// Inverse FFT of table * FFT(f).
Field apply_fourier_table(const Field& f, const Eigen::VectorXcd& table);

/// Fourier multiplier m(sqrt(-Delta)) f; exactly linear in f.
Field fourier_multiplier(const Field& f, const Symbol& m);

/// (sum |f|^p h^dim)^{1/p}; the maximum of |f| for p = inf.
double lp_norm(const Field& f, double p);
double lp_norm(const RealField& f, double p);

/// Sobolev norm with multiplier |k|^s (homogeneous; the k = 0 mode is
/// dropped for every s, the mean-zero convention) or (1 + |k|^2)^{s/2}.
double sobolev_norm(const Field& f, double s, bool homogeneous);

/// ||grad f||_2^2 = sum |k|^2 |fhat|^2 (2L)^dim.
double gradient_norm_squared(const Field& f);

}  // namespace kato
