#pragma once

#include <functional>
#include <utility>

#include "kato/chebyshev.hpp"
#include "kato/lattice.hpp"
#include "kato/schrodinger.hpp"
#include "kato/symbol.hpp"

namespace kato {

/// A linear operator on fields of one grid.
using LinearOp = std::function<Field(const Field&)>;

LinearOp identity_op();
LinearOp compose(LinearOp outer, LinearOp inner);
LinearOp subtract(LinearOp a, LinearOp b);
LinearOp scale(LinearOp a, Complex c);

/// Fourier multiplier m(|k|) with the table precomputed for `grid`.
LinearOp fourier_op(const Grid& grid, const Symbol& m);

/// Chebyshev degree used for m(sqrt(H)) when the configured degree is 0;
/// starts from 8 sqrt(hi - lo) / gap, with gap the symbol's smoothness scale.
int initial_chebyshev_degree(const SchrodingerOp& op, const Symbol& m);

/// The energy function actually expanded (or evaluated on eigenvalues):
/// the symbol's energy form if present, otherwise m(sqrt(max(E, 0))).
std::function<Complex(double)> energy_function(const SchrodingerOp& op,
                                               const Symbol& m);

/// Chebyshev series of m(sqrt(H)) certified to the operator's tolerance.
ChebyshevSeries chebyshev_series(const SchrodingerOp& op, const Symbol& m);

/// m(sqrt(H)) by the operator's strategy.  Precomputes eigenvalue weights
/// (dense) or the Chebyshev series, so the handle is cheap to apply.
/// Dense: throws when more than 1% of modes are negative and the symbol has
/// no energy form (the clamp would dominate).
LinearOp spectral_op(const SchrodingerOp& op, const Symbol& m);

/// Same with an explicit strategy, for oracle comparisons.
LinearOp spectral_op(const SchrodingerOp& op, const Symbol& m, Strategy strategy);

Field apply_multiplier(const SchrodingerOp& op, const Symbol& m, const Field& f);

/// P_N / perturbed projection chi_N(sqrt(H)).
LinearOp fourier_projection(const Grid& grid, double N);
LinearOp perturbed_projection(const SchrodingerOp& op, double N);

/// Q_M = qchi_M(sqrt(-Delta)) and the perturbed Q_M = qchi_M(sqrt(H)).
std::pair<Symbol, LinearOp> q_projection_fourier(const Grid& grid, double M,
                                                 double N, double s);
LinearOp q_projection_perturbed(const SchrodingerOp& op, double M, double N,
                                double s);

/// I = m_N(sqrt(-Delta)) and its perturbed version m_N(sqrt(H)), both with
/// the same discretized symbol.
LinearOp i_operator_fourier(const Grid& grid, double N, double s);
LinearOp i_operator_perturbed(const SchrodingerOp& op, double N, double s);

/// phi_N(sqrt(-Delta)) - phi_N(sqrt(H)) for a profile phi.
LinearOp difference_op(const SchrodingerOp& op, const Symbol& phi, double N);
Field multiplier_difference(const SchrodingerOp& op, const Symbol& phi, double N,
                            const Field& f);

/// The perturbed I-operator minus the Fourier one.
LinearOp i_difference_op(const SchrodingerOp& op, double N, double s);
Field i_difference(const SchrodingerOp& op, double N, double s, const Field& f);

/// P_N |grad|^{-1} H^{1/2} - (perturbed P_N); zero mode dropped.
LinearOp corollary_op(const SchrodingerOp& op, double N);

}  // namespace kato
