#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace kato {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton on the Legendre recurrence).
GaussRule gauss_legendre(int n);

/// (1/h^3) * integral over the cube [-h/2, h/2]^3 of f(|z|) / |z| dz.
/// The 1/|z| singularity is removed by splitting the cube into six
/// pyramids with apex at the origin.
std::complex<double> cube_average_singular(
    double h, const std::function<std::complex<double>(double)>& f,
    int order = 24);

}  // namespace kato
