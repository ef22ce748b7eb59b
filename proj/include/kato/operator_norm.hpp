#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kato/calculus.hpp"

namespace kato {

/// A reproducible set of probe fields with a descriptor naming its classes.
struct ProbeSet {
  std::vector<Field> probes;
  std::vector<std::string> labels;  // class of each probe
  std::string descriptor;
  std::uint64_t seed = 0;
  std::size_t size() const { return probes.size(); }
  void add(Field f, std::string label);
  void append(const ProbeSet& other);
};

/// Independent complex normal samples at every lattice point.
Field gaussian_random_field(const Grid& grid, std::mt19937_64& rng);
/// Random complex Fourier coefficients on lo <= |k| <= hi, zero elsewhere.
Field band_limited_field(const Grid& grid, double lo, double hi, std::mt19937_64& rng);
/// Gaussian packet exp(-|x - x0|^2 / (2 w^2)) exp(i k0 . x) with |k0| = N
/// in a random direction, w = 2 / N, centre within the middle half of the box.
Field shell_bump(const Grid& grid, double N, std::mt19937_64& rng);

/// Probe classes; every generator draws from its own stream derived from
/// the seed so that adding a class does not perturb the others.
ProbeSet gaussian_probes(const Grid& grid, int count, std::uint64_t seed);
ProbeSet band_limited_probes(const Grid& grid, double N, int count, std::uint64_t seed);
ProbeSet shell_probes(const Grid& grid, double N, int count, std::uint64_t seed);
/// The standard mix at scale N: gaussian, band-limited at N and shell bumps,
/// `count` in total (at least 16).
ProbeSet standard_probes(const Grid& grid, double N, int count, std::uint64_t seed);

/// max over probes of ||A f||_p / ||f||_p.  Throws on an empty probe set.
double operator_norm_probe(const LinearOp& a, double p, const ProbeSet& probes);

/// Dense matrix of A in the lattice basis (n^dim <= kDenseCap).
Eigen::MatrixXcd assemble_operator(const LinearOp& a, const Grid& grid);

/// Exact l^2 -> l^2 norm (largest singular value) of the assembled matrix.
double exact_norm_2(const LinearOp& a, const Grid& grid);

}  // namespace kato
