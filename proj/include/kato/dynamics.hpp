#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kato/calculus.hpp"

namespace kato {

/// Thrown when the state stops being finite.
class NonFiniteState : public std::runtime_error {
 public:
  NonFiniteState(long step)
      : std::runtime_error("non-finite state at step " + std::to_string(step)),
        step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

struct EvolutionConfig {
  double dt = 1e-4;
  double t_final = 1e-2;
  /// Diagnostics every `snapshot_stride` steps (and at t = 0).
  int snapshot_stride = 1;
  /// Coefficient of the cubic term: 1 is defocusing NLS; 0 switches the
  /// nonlinearity off (a test hook for linear-flow checks).
  double kappa = 1.0;
  /// Scales N for which E[I_N u] is recorded, with regularity index s.
  std::vector<double> i_scales;
  double s = 0.9;
  /// Steps of the dt/2 shadow run that estimates the splitting floor; 0 skips.
  int shadow_steps = 32;
  /// Directory for field snapshots; empty disables them.
  std::string snapshot_dir;
  /// Field snapshot every this many diagnostic points (0: none).
  int field_snapshot_every = 0;
};

struct DiagnosticSeries {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> energy;
  std::vector<double> scales;
  std::vector<std::vector<double>> i_energy;  // [scale index][time index]
  /// |E[u](t) - E[u](0)|, the splitting-error proxy at each time.
  std::vector<double> split_err;
  long steps = 0;
  double mass_drift = 0.0;    // relative
  double energy_drift = 0.0;  // absolute, max over the run
  /// max(energy drift, shadow-run estimate of the E[I u] splitting error).
  double splitting_floor = 0.0;
  std::vector<std::string> warnings;

  /// max_t |E[I_N u](t) - E[I_N u](0)| for scale index j.
  double i_drift(std::size_t j) const;
};

double mass(const Field& u);
/// 1/2 <Hu, u> + kappa/4 ||u||_4^4.
double energy(const SchrodingerOp& op, const Field& u, double kappa = 1.0);
/// E[I u] with I given as an operator handle.
double i_energy(const SchrodingerOp& op, const LinearOp& i_op, const Field& u,
                double kappa = 1.0);
double i_energy(const SchrodingerOp& op, const Field& u, double N, double s,
                double kappa = 1.0);

/// exp(-itH) u by the operator's strategy.
Field linear_propagate(const SchrodingerOp& op, const Field& u, double t);

/// Strang splitting with exact sub-flows:
///   L(dt/2) o N(dt) o L(dt/2),  N(dt) u = u exp(-i dt kappa |u|^2).
class StrangStepper {
 public:
  StrangStepper(const SchrodingerOp& op, double dt, double kappa = 1.0);

  Field step(const Field& u) const;
  /// k consecutive steps with the interior half-steps fused.
  Field advance(const Field& u, long k, long first_step = 0) const;
  double dt() const { return dt_; }

 private:
  void nonlinear(Field& u, long step) const;

  double dt_;
  double kappa_;
  LinearOp half_;
  LinearOp full_;
};

Field strang_step(const SchrodingerOp& op, const Field& u, double dt,
                  double kappa = 1.0);

/// evolve u0 to t_final, recording diagnostics; the final state is
/// written to `final_state` when given.
DiagnosticSeries evolve(const SchrodingerOp& op, const Field& u0,
                        const EvolutionConfig& cfg, Field* final_state = nullptr);

enum class ScaleDirection { forward, inverse };

/// forward: u_r(x) = r^{-1} u(x / r) on the grid with half period rL and the
/// same spacing.  inverse: maps u_r back, u(x) = r u_r(r x).  Time
/// relabelling (t -> r^2 t) is left to the caller.
Field rescale_solution(const Field& u, double r,
                       ScaleDirection direction = ScaleDirection::forward);

}  // namespace kato
