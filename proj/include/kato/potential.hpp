#pragma once

#include <functional>
#include <memory>
#include <string>

#include <json.hpp>

#include "kato/field.hpp"

namespace kato {

/// Radial profile r -> V(r) of an analytic potential family.
using RadialProfile = std::function<double(double)>;

/// A real potential sampled on a grid, immutable after construction.
///
/// Norm functionals are computed lazily and cached; copies share the cache.
/// Potentials built by the factory keep their analytic radial profile so
/// that scaling and 3d lifts resample exactly instead of interpolating.
class Potential {
 public:
  explicit Potential(RealField values, std::string family = "custom",
                     nlohmann::json params = nlohmann::json::object(),
                     RadialProfile profile = {});

  static Potential zero(const Grid& grid);

  const Grid& grid() const { return values_.grid(); }
  const RealField& field() const { return values_; }
  const Eigen::VectorXd& values() const { return values_.values(); }
  const std::string& family() const { return family_; }
  const nlohmann::json& params() const { return params_; }
  const RadialProfile& profile() const { return profile_; }
  bool has_profile() const { return static_cast<bool>(profile_); }

  double max() const { return values().maxCoeff(); }
  double min() const { return values().minCoeff(); }
  bool is_zero() const { return values().cwiseAbs().maxCoeff() == 0.0; }

  /// Cached norms. kato() throws std::invalid_argument outside 3d.
  double kato() const;
  double b() const;
  double linf() const;
  double lp(double p) const;
  double weak_lp(double p) const;

 private:
  struct Cache;

  RealField values_;
  std::string family_;
  nlohmann::json params_;
  RadialProfile profile_;
  std::shared_ptr<Cache> cache_;
};

struct KatoEstimate {
  double value = 0.0;
  /// |V| nonzero on the outermost lattice layer; periodic images of the
  /// true whole-space configuration are then not negligible.
  bool touches_boundary = false;
  std::size_t argmax = 0;
};

/// Average of 1/|z| over the cube of side h centred at the origin.
double kato_diagonal_average(double h);

/// max over lattice x of sum_y |V(y)| K(x - y) h^3 with K = 1/|z| off the
/// diagonal and the cube average on it.  Non-periodic (zero-padded) sums.
KatoEstimate kato_estimate(const RealField& v);
double kato_norm(const RealField& v);
double kato_norm(const Potential& v);

/// Kato norm of the 3d potential with the same radial profile and box.
/// Uses the analytic value for gaussian wells; otherwise samples the
/// profile on a 3d grid with at most `max_n` points per axis.
double kato_norm_3d_lift(const Potential& v, int max_n = 64);

/// sum_k 2^{k/2} ||V||_{L^2(2^k <= |x| < 2^{k+1})}; the innermost shell
/// k0 = floor(log2 h) absorbs the origin and all smaller radii.
double b_norm(const RealField& v);
double b_norm(const Potential& v);

RealField negative_part(const RealField& v);
Potential negative_part(const Potential& v);

/// sup_t t (h^dim #{|V| > t})^{1/p}, exact from the sorted samples.
double weak_lp_norm(const RealField& v, double p);

/// V_r(x) = r^{-2} V(x / r) on the grid with half period rL and the same
/// spacing.  r must be 2^j with j >= 0.
Potential scale_potential(const Potential& v, double r);

/// Trigonometric interpolation of f onto the grid with r times as many
/// points per axis over the same box (Nyquist modes split evenly).
Field spectral_refine(const Field& f, int r);

/// Build a potential on `grid` from a JSON spec {"family": ..., params}.
/// Families: zero, constant{value}, gaussian_well{depth, width} giving
/// depth * exp(-|x|^2 / width^2), inverse_poly{c, sigma} giving
/// c <x>^{-sigma}, oscillatory{c, omega} giving c cos(omega |x|) <x>^{-3},
/// shell_indicator{r_in, r_out, value}, snapshot{path}, samples{values}.
/// Analytic families accept an optional "truncate" radius.
Potential potential_factory(const Grid& grid, const nlohmann::json& spec);

}  // namespace kato
