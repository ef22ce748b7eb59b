#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "kato/field.hpp"

namespace kato {

/// Thrown when no degree up to the cap meets the tail tolerance.
class IncreaseDegreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truncated Chebyshev series of g on [lo, hi]:
///   g(E) ~ sum_k c_k T_k((E - center) / radius).
struct ChebyshevSeries {
  std::vector<Complex> coeffs;
  double center = 0.0;
  double radius = 1.0;
  /// sum of |c_k| over k > degree, estimated from a 4x oversampled fit.
  double tail = 0.0;
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  Complex operator()(double energy) const;
};

/// Fit of degree K (coefficients from a DCT at 4K + 4 Chebyshev nodes).
ChebyshevSeries chebyshev_fit(const std::function<Complex(double)>& g, double lo,
                              double hi, int degree);

/// Start at `degree` and double until tail <= tol * max(1, max |c_k|), then
/// truncate to the smallest degree the same interpolant certifies.  Throws
/// IncreaseDegreeError past `max_degree`.
ChebyshevSeries chebyshev_auto(const std::function<Complex(double)>& g, double lo,
                               double hi, int degree, double tol, int max_degree);

/// sum_k c_k T_k(A) f with A = (H - center) / radius, three-term recurrence.
Field chebyshev_apply(const ChebyshevSeries& series,
                      const std::function<Field(const Field&)>& apply_h,
                      const Field& f);

}  // namespace kato
