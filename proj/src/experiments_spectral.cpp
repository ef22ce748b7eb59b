#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "kato/experiments.hpp"
#include "kato/fft.hpp"
#include "kato/lanczos.hpp"
#include "kato/quadrature.hpp"

namespace kato {

CoercivityResult coercivity_check(const SchrodingerOp& op, const CoercivityOptions& opt) {
  const Grid& g = op.grid();
  CoercivityResult res;
  const Potential neg = negative_part(op.potential());
  res.kato_negative = g.dim() == 3 ? neg.kato() : kato_norm_3d_lift(neg);
  res.constant = 1.0 - res.kato_negative / (4.0 * std::numbers::pi);
  res.hypothesis = res.constant > 0.0;

  // Probes live in the mean-zero subspace, where the gradient controls the
  // L^2 norm as it does on the whole space.
  std::vector<Field> probes;
  std::vector<std::string> labels;
  std::mt19937_64 rng(opt.seed);
  const double kmin = g.k_min();
  const auto scales = dyadic_range(g).values();
  std::uniform_int_distribution<std::size_t> pick(0, scales.size() - 1);
  for (int i = 0; i < opt.random_probes; ++i) {
    Field f(g);
    std::string label;
    switch (i % 4) {
      case 0:
        f = gaussian_random_field(g, rng);
        label = "gaussian";
        break;
      case 1:
        f = band_limited_field(g, kmin, 3.0 * kmin, rng);
        label = "band_low";
        break;
      case 2: {
        const double N = scales[pick(rng)];
        f = band_limited_field(g, N / 2, 2 * N, rng);
        label = "band_N";
        break;
      }
      default: {
        const double N = std::max(scales[pick(rng)], 2.0 * kmin);
        f = shell_bump(g, N, rng);
        label = "shell_bump";
      }
    }
    probes.push_back(remove_mean(f));
    labels.push_back(label);
  }

  const LinearOp h = op.as_function();
  // P H P + shift (1 - P): the constant mode moves to the top of the
  // spectrum so rounding cannot steer Lanczos onto it.
  const double shift = op.energy_hi();
  const LinearOp projected = [h, shift](const Field& f) {
    const Field pf = remove_mean(f);
    Field out = remove_mean(h(pf));
    out.values() += shift * (f.values() - pf.values());
    return out;
  };
  Field start = remove_mean(gaussian_random_field(g, rng));
  const Eigenpair ground = lanczos_extreme(projected, start, true, opt.lanczos_iter, 1e-10);
  probes.push_back(remove_mean(ground.vector));
  labels.push_back("ground_state");

  // Extremal probe of <Vf, f> / ||grad f||^2: lowest eigenvector of
  // |grad|^{-1} V |grad|^{-1} on mean-zero functions.
  const LinearOp inv_grad = fourier_op(g, power_symbol(-1.0));
  const RealField vf = op.potential().field();
  const LinearOp bs = [inv_grad, vf](const Field& f) {
    return inv_grad(multiply(vf, inv_grad(f)));
  };
  const Eigenpair extremal = lanczos_extreme(bs, start, true, opt.lanczos_iter, 1e-10);
  probes.push_back(inv_grad(extremal.vector));
  labels.push_back("bs_extremal");

  std::vector<double> ratios;
  res.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < probes.size(); ++i) {
    Field f = probes[i];
    f *= Complex(1.0 / std::sqrt(mass(f)));
    const double quad = inner(h(f), f).real();
    const double grad2 = gradient_norm_squared(f);
    const double margin = quad - res.constant * grad2;
    res.min_margin = std::min(res.min_margin, margin);
    if (margin < -opt.tol) ++res.violations;
    ratios.push_back(quad / grad2);
  }
  res.ground_ratio = ratios[ratios.size() - 2];
  res.worst_ratio = ratios.back();
  res.ratios = ratio_report(labels, ratios, false);
  return res;
}

ResonanceResult resonance_check(const Potential& v, double eps, double tol, int keep) {
  const Grid& g = v.grid();
  if (g.size() > kDenseCap) {
    throw std::invalid_argument("resonance_check: dense cap exceeded (n^dim > 4096)");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("resonance_check: eps must be > 0");
  const Eigen::VectorXcd vhat = forward_transform(to_complex(v.field()));
  const auto size = static_cast<Eigen::Index>(g.size());
  const Eigen::Index m = size - 1;  // mean-zero modes: flat index 1..size-1
  const int n = g.n();
  Eigen::MatrixXcd vmat(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const auto ia = g.unflatten(static_cast<std::size_t>(a + 1));
    for (Eigen::Index b = 0; b < m; ++b) {
      const auto ib = g.unflatten(static_cast<std::size_t>(b + 1));
      std::array<int, 3> d{};
      for (int ax = 0; ax < g.dim(); ++ax) d[ax] = ((ia[ax] - ib[ax]) % n + n) % n;
      vmat(a, b) = vhat[static_cast<Eigen::Index>(g.flatten(d))];
    }
  }
  vmat = 0.5 * (vmat + vmat.adjoint()).eval();
  const Eigen::VectorXd ksq = g.k_squared().tail(m);

  auto top_eigs = [&](double e) {
    const Eigen::VectorXd w = (ksq.array() + e).rsqrt();
    Eigen::MatrixXcd b = -(w.asDiagonal() * vmat * w.asDiagonal());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b, Eigen::EigenvaluesOnly);
    return es.eigenvalues().tail(std::min<Eigen::Index>(keep, m)).reverse().eval();
  };
  const Eigen::VectorXd mu_eps = top_eigs(eps);
  const Eigen::VectorXd mu_half = top_eigs(eps / 2);

  ResonanceResult res;
  res.eps = eps;
  for (Eigen::Index i = 0; i < mu_eps.size(); ++i) {
    res.bs_eigenvalues.push_back(2.0 * mu_half[i] - mu_eps[i]);
  }
  res.top = res.bs_eigenvalues.front();
  res.top_eps = mu_eps[0];
  res.top_half = mu_half[0];
  const bool stable = std::abs(res.top_half - res.top_eps) <= tol;
  res.resonant = std::abs(res.top - 1.0) <= tol && stable;
  res.supercritical = res.top > 1.0 + tol;

  Eigen::MatrixXcd hmat = vmat;
  hmat.diagonal().array() += ksq.array().cast<Complex>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hmat, Eigen::EigenvaluesOnly);
  res.lowest_energy = es.eigenvalues()[0];
  return res;
}

namespace {

// Non-periodic convolution with a translation-invariant kernel, by
// zero-padding to twice the grid per axis.
class FreeConvolution {
 public:
  FreeConvolution(const Grid& g, const std::function<Complex(double)>& kernel,
                  Complex diagonal)
      : g_(g), m_(2 * g.n()) {
    const int n = g.n();
    const int dim = g.dim();
    total_ = 1;
    for (int a = 0; a < dim; ++a) total_ *= m_;
    khat_.resize(total_);
    const double h = g.spacing();
    for (Eigen::Index p = 0; p < total_; ++p) {
      Eigen::Index rest = p;
      double r2 = 0.0;
      for (int a = dim - 1; a >= 0; --a) {
        const int i = static_cast<int>(rest % m_);
        rest /= m_;
        const int o = i < n ? i : i - m_;
        r2 += double(o) * o;
      }
      khat_[p] = r2 == 0.0 ? diagonal : kernel(h * std::sqrt(r2));
    }
    fft_in_place(khat_, dim, m_, false);
    khat_ *= g.cell_volume() / static_cast<double>(total_);
  }

  Field operator()(const Field& f) const {
    Eigen::VectorXcd buf = Eigen::VectorXcd::Zero(total_);
    for (std::size_t p = 0; p < g_.size(); ++p) buf[pad(p)] = f[static_cast<Eigen::Index>(p)];
    fft_in_place(buf, g_.dim(), m_, false);
    buf.array() *= khat_.array();
    fft_in_place(buf, g_.dim(), m_, true);
    Field out(g_);
    for (std::size_t p = 0; p < g_.size(); ++p) out[static_cast<Eigen::Index>(p)] = buf[pad(p)];
    return out;
  }

 private:
  Eigen::Index pad(std::size_t p) const {
    const auto idx = g_.unflatten(p);
    Eigen::Index q = 0;
    for (int a = 0; a < g_.dim(); ++a) q = q * m_ + idx[a];
    return q;
  }

  Grid g_;
  int m_;
  Eigen::Index total_ = 0;
  Eigen::VectorXcd khat_;
};

}  // namespace

LippmannSchwingerResult lippmann_schwinger_solve(const Potential& v,
                                                 const std::array<double, 3>& xi,
                                                 const LippmannSchwingerConfig& cfg) {
  const Grid& g = v.grid();
  if (g.dim() != 3) throw std::invalid_argument("lippmann_schwinger: 3d only");
  const double k = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
  if (!(k > 0.0)) throw std::invalid_argument("lippmann_schwinger: |xi| must be > 0");
  const Field e0 = sample(g, [&](const std::array<double, 3>& x) {
    return std::polar(1.0, xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2]);
  });
  LippmannSchwingerResult res{e0, false, 0, 0.0, {}, 0.0};
  if (v.is_zero()) {
    res.converged = true;
    return res;
  }
  const double four_pi = 4.0 * std::numbers::pi;
  const Complex diag =
      cube_average_singular(g.spacing(), [k](double r) { return std::polar(1.0, k * r); }) /
      four_pi;
  const FreeConvolution g0(
      g, [k, four_pi](double r) { return std::polar(1.0, k * r) / (four_pi * r); }, diag);
  const double e0_norm = lp_norm(e0, 2.0);
  const RealField& vf = v.field();

  Field e = e0;
  for (int it = 0; it <= cfg.max_iter; ++it) {
    const Field scattered = g0(multiply(vf, e));
    Field fixed = e0 - scattered;
    const double resid = lp_norm(e - fixed, 2.0) / e0_norm;
    res.history.push_back(resid);
    res.iterations = it;
    if (!std::isfinite(resid) || resid > 1e8) break;
    if (resid <= cfg.tol) {
      res.converged = true;
      break;
    }
    if (it == cfg.max_iter) break;
    e.values() = (1.0 - cfg.relaxation) * e.values() + cfg.relaxation * fixed.values();
  }
  res.residual = res.history.back();
  res.e = e;
  res.scattered = lp_norm(e - e0, 2.0) / e0_norm;
  return res;
}

}  // namespace kato
