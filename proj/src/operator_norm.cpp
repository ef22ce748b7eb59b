#include "kato/operator_norm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "kato/fft.hpp"

namespace kato {

void ProbeSet::add(Field f, std::string label) {
  probes.push_back(std::move(f));
  labels.push_back(std::move(label));
}

void ProbeSet::append(const ProbeSet& other) {
  for (std::size_t i = 0; i < other.size(); ++i) add(other.probes[i], other.labels[i]);
  descriptor += (descriptor.empty() ? "" : "+") + other.descriptor;
}

Field gaussian_random_field(const Grid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Field f(grid);
  for (Eigen::Index p = 0; p < f.size(); ++p) {
    const double re = normal(rng);
    const double im = normal(rng);
    f[p] = Complex(re, im);
  }
  return f;
}

Field band_limited_field(const Grid& grid, double lo, double hi, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const auto& kabs = grid.k_abs();
  Eigen::VectorXcd coeffs = Eigen::VectorXcd::Zero(kabs.size());
  for (Eigen::Index p = 0; p < kabs.size(); ++p) {
    const double re = normal(rng);
    const double im = normal(rng);
    if (kabs[p] >= lo && kabs[p] <= hi) coeffs[p] = Complex(re, im);
  }
  return inverse_transform(grid, coeffs);
}

Field shell_bump(const Grid& grid, double N, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(-0.5, 0.5);
  std::array<double, 3> dir{};
  double norm = 0.0;
  for (int a = 0; a < grid.dim(); ++a) {
    dir[a] = normal(rng);
    norm += dir[a] * dir[a];
  }
  norm = std::sqrt(norm);
  std::array<double, 3> centre{};
  for (int a = 0; a < grid.dim(); ++a) {
    dir[a] *= N / norm;
    centre[a] = uniform(rng) * grid.half_period();
  }
  const double w = 2.0 / N;
  return sample(grid, [&](const std::array<double, 3>& x) {
    double r2 = 0.0;
    double phase = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      r2 += (x[a] - centre[a]) * (x[a] - centre[a]);
      phase += dir[a] * x[a];
    }
    return std::exp(-r2 / (2.0 * w * w)) * std::polar(1.0, phase);
  });
}

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(seq);
}

}  // namespace

ProbeSet gaussian_probes(const Grid& grid, int count, std::uint64_t seed) {
  ProbeSet set;
  set.seed = seed;
  set.descriptor = "gaussian-random x" + std::to_string(count);
  auto rng = stream(seed, 1);
  for (int i = 0; i < count; ++i) set.add(gaussian_random_field(grid, rng), "gaussian");
  return set;
}

ProbeSet band_limited_probes(const Grid& grid, double N, int count, std::uint64_t seed) {
  ProbeSet set;
  set.seed = seed;
  set.descriptor = "band-limited[N/2,2N] x" + std::to_string(count);
  auto rng = stream(seed, 2);
  for (int i = 0; i < count; ++i) {
    set.add(band_limited_field(grid, N / 2, 2 * N, rng), "band_limited");
  }
  return set;
}

ProbeSet shell_probes(const Grid& grid, double N, int count, std::uint64_t seed) {
  ProbeSet set;
  set.seed = seed;
  set.descriptor = "shell-bump x" + std::to_string(count);
  auto rng = stream(seed, 3);
  for (int i = 0; i < count; ++i) set.add(shell_bump(grid, N, rng), "shell_bump");
  return set;
}

ProbeSet standard_probes(const Grid& grid, double N, int count, std::uint64_t seed) {
  count = std::max(count, 16);
  const int g = count / 4;
  const int s = count / 4;
  const int b = count - g - s;
  ProbeSet set = gaussian_probes(grid, g, seed);
  set.append(band_limited_probes(grid, N, b, seed));
  set.append(shell_probes(grid, N, s, seed));
  set.seed = seed;
  return set;
}

double operator_norm_probe(const LinearOp& a, double p, const ProbeSet& probes) {
  if (probes.size() == 0) throw std::invalid_argument("empty probe set");
  double best = 0.0;
  for (const Field& f : probes.probes) {
    const double denom = lp_norm(f, p);
    if (denom == 0.0) continue;
    best = std::max(best, lp_norm(a(f), p) / denom);
  }
  return best;
}

Eigen::MatrixXcd assemble_operator(const LinearOp& a, const Grid& grid) {
  if (grid.size() > kDenseCap) {
    throw std::invalid_argument("operator assembly limited to n^dim <= 4096");
  }
  const auto size = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXcd m(size, size);
  Field e(grid);
  for (Eigen::Index c = 0; c < size; ++c) {
    e[c] = 1.0;
    m.col(c) = a(e).values();
    e[c] = 0.0;
  }
  return m;
}

double exact_norm_2(const LinearOp& a, const Grid& grid) {
  const Eigen::MatrixXcd m = assemble_operator(a, grid);
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  if (m.imag().cwiseAbs().maxCoeff() <= 1e-14 * scale) {
    const Eigen::MatrixXd r = m.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.transpose() * r,
                                                      Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.adjoint() * m,
                                                     Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

}  // namespace kato
