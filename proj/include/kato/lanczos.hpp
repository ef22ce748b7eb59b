#pragma once

#include "kato/calculus.hpp"

namespace kato {

struct Eigenpair {
  double value;
  Field vector;
  double residual;  // ||A v - value v|| / ||v||
};

/// Extreme eigenpair of a Hermitian operator by Lanczos with full
/// reorthogonalization, started from `start`.  `smallest` selects the
/// lower end of the spectrum.  Stops when the Ritz residual falls below
/// tol * |value| or after max_iter steps.
Eigenpair lanczos_extreme(const LinearOp& a, const Field& start, bool smallest,
                          int max_iter = 300, double tol = 1e-10);

}  // namespace kato
