#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "kato/experiments.hpp"

namespace kato {

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

void require_headroom(const SchrodingerOp& op, const std::vector<double>& N_list) {
  const double top = std::sqrt(op.energy_hi());
  for (double N : N_list) {
    if (4.0 * N > top) {
      throw std::invalid_argument("insufficient spectral headroom: 4N = " +
                                  std::to_string(4.0 * N) + " exceeds sqrt(energy_hi) = " +
                                  std::to_string(top));
    }
  }
}

DecaySweep norm_sweep(const std::function<LinearOp(double)>& make, const Grid& grid,
                      const std::vector<double>& N_list, double target_slope,
                      const SweepOptions& opt) {
  DecaySweep out;
  std::vector<double> values;
  for (std::size_t j = 0; j < N_list.size(); ++j) {
    const double N = N_list[j];
    const LinearOp a = make(N);
    const ProbeSet probes = standard_probes(grid, N, opt.probe_count, mix(opt.seed, j));
    out.probe_descriptor = probes.descriptor;
    out.probe_count = static_cast<int>(probes.size());
    out.probe.push_back(operator_norm_probe(a, opt.p, probes));
    if (opt.mode == NormMode::exact) {
      if (opt.p != 2.0) throw std::invalid_argument("exact norms are offered for p = 2 only");
      out.exact.push_back(exact_norm_2(a, grid));
      values.push_back(out.exact.back());
    } else {
      out.exact.push_back(std::numeric_limits<double>::quiet_NaN());
      values.push_back(out.probe.back());
    }
  }
  out.fit = decay_fit(N_list, values, target_slope, opt.slack);
  return out;
}

DecaySweep difference_decay(const SchrodingerOp& op, const Symbol& phi,
                            const std::vector<double>& N_list, double alpha,
                            const SweepOptions& opt) {
  require_headroom(op, N_list);
  return norm_sweep([&](double N) { return difference_op(op, phi, N); }, op.grid(), N_list,
                    -alpha, opt);
}

DecaySweep gradient_difference_decay(const SchrodingerOp& op, const Symbol& phi,
                                     const std::vector<double>& N_list, double beta,
                                     double alpha, const SweepOptions& opt) {
  require_headroom(op, N_list);
  const LinearOp grad = fourier_op(op.grid(), power_symbol(beta));
  return norm_sweep([&](double N) { return compose(grad, difference_op(op, phi, N)); },
                    op.grid(), N_list, -alpha + beta, opt);
}

DecaySweep corollary_decay(const SchrodingerOp& op, const std::vector<double>& N_list,
                           double alpha, const SweepOptions& opt) {
  require_headroom(op, N_list);
  return norm_sweep([&](double N) { return corollary_op(op, N); }, op.grid(), N_list,
                    -alpha, opt);
}

DecaySweep i_difference_decay(const SchrodingerOp& op, const std::vector<double>& N_list,
                              double beta, double s, const SweepOptions& opt) {
  require_headroom(op, N_list);
  const LinearOp grad = fourier_op(op.grid(), power_symbol(beta));
  return norm_sweep([&](double N) { return compose(grad, i_difference_op(op, N, s)); },
                    op.grid(), N_list, -2.0 + beta, opt);
}

ProbeSet mean_zero_probes(const Grid& grid, double N, int count, std::uint64_t seed) {
  ProbeSet set = standard_probes(grid, N, count, seed);
  for (auto& f : set.probes) f = remove_mean(f);
  set.descriptor += " (mean zero)";
  return set;
}

RatioReport norm_equivalence_ratio(const SchrodingerOp& op, double s, double r,
                                   const ProbeSet& probes) {
  const LinearOp hs = spectral_op(op, power_symbol(s));
  const LinearOp gs = fourier_op(op.grid(), power_symbol(s));
  std::vector<double> ratios;
  for (const auto& f : probes.probes) ratios.push_back(lp_norm(hs(f), r) / lp_norm(gs(f), r));
  return ratio_report(probes.labels, ratios);
}

RatioReport sobolev_ratio(const SchrodingerOp& op, double s, double p, double q,
                          const ProbeSet& probes) {
  const LinearOp hs = spectral_op(op, power_symbol(-s));
  std::vector<double> ratios;
  for (const auto& f : probes.probes) ratios.push_back(lp_norm(hs(f), q) / lp_norm(f, p));
  return ratio_report(probes.labels, ratios);
}

namespace {

// Trapezoid weights on `samples` equispaced nodes of [0, T].
std::vector<double> trapezoid(const TimeWindow& w) {
  if (w.samples < 2) throw std::invalid_argument("time window needs >= 2 samples");
  std::vector<double> wt(w.samples, w.T / (w.samples - 1));
  wt.front() *= 0.5;
  wt.back() *= 0.5;
  return wt;
}

}  // namespace

RatioReport strichartz_ratio(const SchrodingerOp& op, double q, double r,
                             const TimeWindow& window, const ProbeSet& probes) {
  const auto wt = trapezoid(window);
  const LinearOp step =
      spectral_op(op, propagator_symbol(window.T / (window.samples - 1)));
  std::vector<double> ratios;
  for (const auto& f : probes.probes) {
    Field u = f;
    double acc = 0.0;
    for (int j = 0; j < window.samples; ++j) {
      if (j > 0) u = step(u);
      acc += wt[j] * std::pow(lp_norm(u, r), q);
    }
    ratios.push_back(std::pow(acc, 1.0 / q) / lp_norm(f, 2.0));
  }
  return ratio_report(probes.labels, ratios);
}

BilinearResult bilinear_ratio(const SchrodingerOp& op, double N1,
                              const std::vector<double>& N2_list,
                              const TimeWindow& window, const BilinearOptions& opt) {
  const Grid& g = op.grid();
  const auto wt = trapezoid(window);
  const LinearOp step =
      spectral_op(op, propagator_symbol(window.T / (window.samples - 1)));
  const LinearOp p1 = perturbed_projection(op, N1);

  auto packet = [&](double x0, double k0, double phase) {
    const double w = opt.packet_width;
    return sample(g, [&](const std::array<double, 3>& x) {
      double r2 = (x[0] - x0) * (x[0] - x0);
      for (int a = 1; a < g.dim(); ++a) r2 += x[a] * x[a];
      return std::exp(-r2 / (2.0 * w * w)) * std::polar(1.0, k0 * x[0] + phase);
    });
  };

  BilinearResult result;
  result.expected_factor = std::sqrt(2.0);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  // Draw all jitters up front so every N2 sees the same probe geometry.
  struct Draw {
    double x1, x2, k1, k2, ph1, ph2;
  };
  std::vector<Draw> draws;
  for (int i = 0; i < opt.pairs; ++i) {
    Draw d{};
    d.x1 = jitter(rng) * opt.packet_width;
    d.x2 = -opt.separation + jitter(rng) * opt.packet_width;
    d.k1 = 1.0 + 0.2 * jitter(rng);
    d.k2 = 1.0 + 0.2 * jitter(rng);
    d.ph1 = 2.0 * std::numbers::pi * jitter(rng);
    d.ph2 = 2.0 * std::numbers::pi * jitter(rng);
    draws.push_back(d);
  }

  for (double N2 : N2_list) {
    const LinearOp p2 = perturbed_projection(op, N2);
    BilinearPoint point;
    point.N1 = N1;
    point.N2 = N2;
    std::vector<double> ratios;
    std::vector<std::string> labels;
    for (int i = 0; i < opt.pairs; ++i) {
      const Draw& d = draws[i];
      Field u1 = p1(packet(d.x1, d.k1 * N1, d.ph1));
      Field u2 = p2(packet(d.x2, d.k2 * N2, d.ph2));
      const double norms = lp_norm(u1, 2.0) * lp_norm(u2, 2.0);
      double acc = 0.0;
      for (int j = 0; j < window.samples; ++j) {
        if (j > 0) {
          u1 = step(u1);
          u2 = step(u2);
        }
        acc += wt[j] * (u1.values().cwiseAbs2().cwiseProduct(u2.values().cwiseAbs2()))
                           .sum() *
               g.cell_volume();
      }
      ratios.push_back(std::sqrt(acc) / norms);
      labels.push_back("pair" + std::to_string(i));
    }
    point.report = ratio_report(labels, ratios);
    result.points.push_back(point);
  }
  for (std::size_t j = 1; j < result.points.size(); ++j) {
    result.doubling_factors.push_back(result.points[j - 1].report.median /
                                      result.points[j].report.median);
  }
  return result;
}

EnergyComparison energy_comparison(const SchrodingerOp& op, const ProbeSet& probes,
                                   double N, double s) {
  const LinearOp i_op = i_operator_perturbed(op, N, s);
  std::vector<double> up, low;
  for (const auto& f : probes.probes) {
    const double ei = i_energy(op, i_op, f);
    const double hs = sobolev_norm(f, s, false);
    up.push_back(ei / (std::pow(N, 2.0 - 2.0 * s) * (1.0 + std::pow(hs, 4))));
    low.push_back(hs * hs / (ei + mass(f)));
  }
  return {ratio_report(probes.labels, up), ratio_report(probes.labels, low)};
}

}  // namespace kato
