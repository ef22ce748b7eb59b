#include "kato/calculus.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kato {

LinearOp identity_op() {
  return [](const Field& f) { return f; };
}

LinearOp compose(LinearOp outer, LinearOp inner) {
  return [outer = std::move(outer), inner = std::move(inner)](const Field& f) {
    return outer(inner(f));
  };
}

LinearOp subtract(LinearOp a, LinearOp b) {
  return [a = std::move(a), b = std::move(b)](const Field& f) { return a(f) - b(f); };
}

LinearOp scale(LinearOp a, Complex c) {
  return [a = std::move(a), c](const Field& f) { return c * a(f); };
}

LinearOp fourier_op(const Grid& grid, const Symbol& m) {
  return [table = multiplier_table(grid, m), grid](const Field& f) {
    require_same_grid(f.grid(), grid);
    return apply_fourier_table(f, table);
  };
}

int initial_chebyshev_degree(const SchrodingerOp& op, const Symbol& m) {
  const double width = op.energy_hi() - op.energy_lo();
  if (m.kind() == SymbolKind::propagator) {
    return static_cast<int>(std::ceil(std::abs(m.params().t) * width / 2.0)) + 20;
  }
  if (m.kind() == SymbolKind::power && m.has_energy_form()) {
    return std::max(1, static_cast<int>(m.params().exponent / 2.0));
  }
  if (m.smoothness_scale() > 0.0) {
    return static_cast<int>(std::ceil(8.0 * std::sqrt(width) / m.smoothness_scale()));
  }
  return 64;
}

std::function<Complex(double)> energy_function(const SchrodingerOp& op,
                                               const Symbol& m) {
  if (m.has_energy_form()) {
    return [m](double e) { return m.at_energy(e); };
  }
  if (op.energy_lo() < 0.0 && !op.strategy().chebyshev.clamp_at_zero &&
      op.kind() == Strategy::chebyshev) {
    throw std::invalid_argument("symbol " + m.name() +
                                " is undefined on negative energies and "
                                "clamp_at_zero is disabled");
  }
  return [m](double e) { return m(std::sqrt(std::max(e, 0.0))); };
}

ChebyshevSeries chebyshev_series(const SchrodingerOp& op, const Symbol& m) {
  const ChebyshevConfig& cfg = op.strategy().chebyshev;
  const auto g = energy_function(op, m);
  const double lo = op.energy_lo();
  const double hi = op.energy_hi();
  if (cfg.degree > 0) {
    ChebyshevSeries s = chebyshev_fit(g, lo, hi, cfg.degree);
    double scale = 1.0;
    for (const auto& c : s.coeffs) scale = std::max(scale, std::abs(c));
    const double roundoff = (4.0 * cfg.degree + 4.0) * std::numeric_limits<double>::epsilon();
    if (s.tail > (cfg.tol + roundoff) * scale) {
      throw IncreaseDegreeError("Chebyshev degree " + std::to_string(cfg.degree) +
                                " too small for " + m.name() + ": increase K");
    }
    return s;
  }
  return chebyshev_auto(g, lo, hi, initial_chebyshev_degree(op, m), cfg.tol,
                        cfg.max_degree);
}

LinearOp spectral_op(const SchrodingerOp& op, const Symbol& m, Strategy strategy) {
  const Grid grid = op.grid();
  if (strategy == Strategy::chebyshev) {
    ChebyshevSeries series = chebyshev_series(op, m);
    return [series = std::move(series), h = op.as_function(), grid](const Field& f) {
      require_same_grid(f.grid(), grid);
      return chebyshev_apply(series, h, f);
    };
  }
  const DenseSpectrum& spec = op.spectrum();
  if (!m.has_energy_form() &&
      spec.negative_count > 0.01 * static_cast<double>(spec.eigenvalues.size())) {
    throw std::runtime_error("clamp policy: " + std::to_string(spec.negative_count) +
                             " negative modes exceed 1% of the spectrum");
  }
  const auto g = energy_function(op, m);
  Eigen::VectorXcd weights(spec.eigenvalues.size());
  for (Eigen::Index j = 0; j < weights.size(); ++j) weights[j] = g(spec.eigenvalues[j]);
  const Eigen::MatrixXd* vecs = &spec.eigenvectors;
  // The handle keeps the operator alive, and with it the eigenvectors.
  return [op, vecs, weights = std::move(weights), grid](const Field& f) {
    require_same_grid(f.grid(), grid);
    const Eigen::VectorXd re = vecs->transpose() * f.values().real();
    const Eigen::VectorXd im = vecs->transpose() * f.values().imag();
    const Eigen::VectorXcd c =
        weights.cwiseProduct((re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>()));
    const Eigen::VectorXd out_re = *vecs * c.real();
    const Eigen::VectorXd out_im = *vecs * c.imag();
    Field out(grid);
    out.values().real() = out_re;
    out.values().imag() = out_im;
    return out;
  };
}

LinearOp spectral_op(const SchrodingerOp& op, const Symbol& m) {
  return spectral_op(op, m, op.kind());
}

Field apply_multiplier(const SchrodingerOp& op, const Symbol& m, const Field& f) {
  return spectral_op(op, m)(f);
}

LinearOp fourier_projection(const Grid& grid, double N) {
  return fourier_op(grid, dyadic_bump(N));
}

LinearOp perturbed_projection(const SchrodingerOp& op, double N) {
  return spectral_op(op, dyadic_bump(N));
}

std::pair<Symbol, LinearOp> q_projection_fourier(const Grid& grid, double M,
                                                 double N, double s) {
  Symbol q = q_symbol(M, N, s);
  return {q, fourier_op(grid, q)};
}

LinearOp q_projection_perturbed(const SchrodingerOp& op, double M, double N,
                                double s) {
  return spectral_op(op, q_symbol(M, N, s));
}

LinearOp i_operator_fourier(const Grid& grid, double N, double s) {
  return fourier_op(grid, i_symbol(N, s));
}

LinearOp i_operator_perturbed(const SchrodingerOp& op, double N, double s) {
  return spectral_op(op, i_symbol(N, s));
}

LinearOp difference_op(const SchrodingerOp& op, const Symbol& phi, double N) {
  const Symbol phi_n = rescaled(phi, N);
  return subtract(fourier_op(op.grid(), phi_n), spectral_op(op, phi_n));
}

Field multiplier_difference(const SchrodingerOp& op, const Symbol& phi, double N,
                            const Field& f) {
  return difference_op(op, phi, N)(f);
}

LinearOp i_difference_op(const SchrodingerOp& op, double N, double s) {
  return subtract(i_operator_perturbed(op, N, s), i_operator_fourier(op.grid(), N, s));
}

Field i_difference(const SchrodingerOp& op, double N, double s, const Field& f) {
  return i_difference_op(op, N, s)(f);
}

LinearOp corollary_op(const SchrodingerOp& op, double N) {
  const Symbol chi = dyadic_bump(N);
  Symbol outer(SymbolKind::custom, "chi_N/l", [chi](double l) {
    return l > 0.0 ? chi(l) / l : Complex(0.0);
  });
  const LinearOp lhs = compose(fourier_op(op.grid(), outer),
                               spectral_op(op, power_symbol(1.0)));
  return subtract(lhs, perturbed_projection(op, N));
}

}  // namespace kato
