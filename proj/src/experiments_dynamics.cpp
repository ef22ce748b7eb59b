#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "kato/experiments.hpp"
#include "kato/fft.hpp"

namespace kato {

Field power_law_datum(const Grid& grid, double sigma, std::uint64_t seed, double band) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const auto& ksq = grid.k_squared();
  const auto& kabs = grid.k_abs();
  Eigen::VectorXcd coeffs(ksq.size());
  for (Eigen::Index p = 0; p < ksq.size(); ++p) {
    const double ph = phase(rng);
    const bool keep = ksq[p] > 0.0 && (band <= 0.0 || kabs[p] < band);
    coeffs[p] = keep ? std::polar(std::pow(1.0 + ksq[p], -sigma / 2.0), ph) : Complex(0.0);
  }
  return inverse_transform(grid, coeffs);
}

Field normalize_i_energy(const SchrodingerOp& op, const Field& u,
                         const std::vector<double>& N_list, double s, double target,
                         double kappa) {
  double amp = std::numeric_limits<double>::infinity();
  for (double N : N_list) {
    const Field iu = i_operator_perturbed(op, N, s)(u);
    const double q = 0.5 * inner(op.apply(iu), iu).real();
    const double p = 0.25 * kappa *
                     iu.values().cwiseAbs2().array().square().sum() * u.grid().cell_volume();
    if (!(q > 0.0)) throw std::invalid_argument("normalization: quadratic energy not positive");
    const double a2 = p > 0.0 ? (-q + std::sqrt(q * q + 4.0 * p * target)) / (2.0 * p)
                              : target / q;
    amp = std::min(amp, std::sqrt(a2));
  }
  return amp * u;
}

AlmostConservation almost_conservation_sweep(const SchrodingerOp& op, const Field& u0,
                                             double s, const std::vector<double>& N_list,
                                             const AlmostConservationOptions& opt) {
  AlmostConservation out;
  double dt = opt.dt;
  int stride = opt.snapshot_stride;
  for (int attempt = 0;; ++attempt) {
    EvolutionConfig cfg;
    cfg.dt = dt;
    cfg.t_final = opt.delta;
    cfg.snapshot_stride = stride;
    cfg.kappa = opt.kappa;
    cfg.i_scales = N_list;
    cfg.s = s;
    cfg.shadow_steps = opt.shadow_steps;
    out.series = evolve(op, u0, cfg);
    out.dt = dt;
    out.retries = attempt;
    out.drift.clear();
    for (std::size_t j = 0; j < N_list.size(); ++j) out.drift.push_back(out.series.i_drift(j));
    const double smallest = *std::min_element(out.drift.begin(), out.drift.end());
    out.floor_margin = out.series.splitting_floor > 0.0
                           ? smallest / out.series.splitting_floor
                           : std::numeric_limits<double>::infinity();
    out.conclusive = out.floor_margin >= opt.floor_ratio;
    if (out.conclusive || attempt >= opt.max_retries) break;
    dt /= 2.0;
    stride *= 2;
  }
  out.fit = decay_fit(N_list, out.drift, opt.target_slope, opt.slack, 0.0);
  out.monotone = monotone_nonincreasing(out.drift, opt.monotone_tol);
  return out;
}

HalvingStudy dt_halving(const SchrodingerOp& op, const Field& u0, double dt,
                        double t_final, int levels, double kappa) {
  HalvingStudy study;
  for (int j = 0; j < levels; ++j) {
    EvolutionConfig cfg;
    cfg.dt = dt / std::ldexp(1.0, j);
    cfg.t_final = t_final;
    cfg.snapshot_stride = 1 << j;
    cfg.kappa = kappa;
    cfg.shadow_steps = 0;
    const DiagnosticSeries d = evolve(op, u0, cfg);
    study.dt.push_back(cfg.dt);
    study.energy_drift.push_back(d.energy_drift);
    study.mass_drift.push_back(d.mass_drift);
  }
  if (levels >= 2 && study.energy_drift[1] > 0.0) {
    study.ratio = study.energy_drift[0] / study.energy_drift[1];
  }
  return study;
}

}  // namespace kato
