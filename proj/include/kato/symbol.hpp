#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "kato/grid.hpp"

namespace kato {

using Complex = std::complex<double>;

enum class SymbolKind { dyadic_bump, i_symbol, propagator, power, custom };

const char* to_string(SymbolKind kind);

struct SymbolParams {
  double N = 0.0;         // dyadic scale (bumps, I-symbols)
  double s = 0.0;         // regularity index of the I-symbol
  double t = 0.0;         // time of a propagator
  double exponent = 0.0;  // power symbols
};

/// A scalar spectral function lambda -> m(lambda) on [0, inf).
///
/// Fourier multipliers evaluate m(|k|); functional calculus evaluates m at
/// sqrt(E) for each energy E of H, clamping negative energies to zero.  A
/// symbol may carry an energy form E -> g(E) that is used by the functional
/// calculus instead of m(sqrt(max(E, 0))); propagators and even powers use
/// this since they are defined for negative energies without clamping.
class Symbol {
 public:
  using Fn = std::function<Complex(double)>;

  Symbol(SymbolKind kind, std::string name, Fn radial, double support_lo = 0.0,
         double support_hi = std::numeric_limits<double>::infinity());

  Complex operator()(double lambda) const { return radial_(lambda); }

  /// g(E); falls back to m(sqrt(max(E, 0))).
  Complex at_energy(double energy) const;
  bool has_energy_form() const { return static_cast<bool>(energy_); }
  Symbol with_energy_form(Fn energy) const;

  SymbolKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const SymbolParams& params() const { return params_; }
  Symbol with_params(const SymbolParams& p) const;

  double support_lo() const { return support_lo_; }
  double support_hi() const { return support_hi_; }

  /// Width of the narrowest feature in lambda; 0 when not meaningful.
  double smoothness_scale() const { return smoothness_; }
  Symbol with_smoothness_scale(double scale) const;

  bool real_valued() const { return real_; }
  Symbol with_real_valued(bool real) const;

 private:
  SymbolKind kind_;
  std::string name_;
  Fn radial_;
  Fn energy_;
  double support_lo_;
  double support_hi_;
  SymbolParams params_;
  double smoothness_ = 0.0;
  bool real_ = true;
};

/// eta(t) = theta(t) / (theta(t) + theta(1 - t)), theta(t) = exp(-1/t) [t>0].
double smooth_step(double t);
/// Phi(lambda) = eta(2 - lambda): 1 on (-inf, 1], 0 on [2, inf).
double low_cutoff(double lambda);
/// chi(lambda) = Phi(lambda) - Phi(2 lambda), supported in [1/2, 2].
double dyadic_profile(double lambda);

Symbol identity_symbol();
/// chi_N(lambda) = chi(lambda / N).
Symbol dyadic_bump(double N);
/// phi_N(lambda) = phi(lambda / N).
Symbol rescaled(const Symbol& profile, double N);

/// Dyadic samples m_N(M) of the I-symbol: 1 for M <= N, (N/M)^{1-s} above.
double i_weight(double M, double N, double s);
/// Discretized I-symbol sum_M m_N(M) chi_M(lambda) (1 at lambda = 0).
Symbol i_symbol(double N, double s);
/// m(M) chi_M(lambda) / sum_K m(K) chi_K(lambda).
Symbol q_symbol(double M, double N, double s);
/// lambda -> exp(-i t lambda^2), energy form exp(-i t E).
Symbol propagator_symbol(double t);
/// lambda -> lambda^s.  The zero mode maps to 0 for s != 0.  Even integer
/// powers carry the exact energy form E^{s/2}.
Symbol power_symbol(double s);
/// Smooth bump equal to eta-ramps on [a, a + w] and [b - w, b], 1 between,
/// supported in [a, b] with w = (b - a) / 4.
Symbol smooth_bump(double a, double b);
/// Pointwise product (kind custom).
Symbol product(const Symbol& a, const Symbol& b);

/// Dyadic numbers 2^j, j_lo <= j <= j_hi.
struct DyadicRange {
  int j_lo = 0;
  int j_hi = 0;
  std::vector<double> values() const;
  bool contains(double N) const;
};

/// N from 2^{ceil(log2 lo) - 1} to 2^{ceil(log2 hi)}; every lambda in
/// [lo, hi] is covered by the telescoping partition over this range.
DyadicRange dyadic_range(double lo, double hi);
/// dyadic_range(k_min, k_max) of the grid.
DyadicRange dyadic_range(const Grid& grid);

/// max over grid |k| > 0 of |sum_N chi_N(|k|) - 1| over the grid range.
double partition_check(const Grid& grid);

/// True when v is an exact power of two (negative exponents allowed).
bool is_dyadic(double v);

}  // namespace kato
