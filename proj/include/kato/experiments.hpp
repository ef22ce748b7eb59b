#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kato/calculus.hpp"
#include "kato/dynamics.hpp"
#include "kato/fit.hpp"
#include "kato/operator_norm.hpp"
#include "kato/report.hpp"

namespace kato {

// ---------------------------------------------------------------------------
// Decay-rate sweeps over dyadic N.

enum class NormMode { probe, exact };

struct DecaySweep {
  DecayFit fit;
  std::vector<double> probe;   // probe lower bounds per N
  std::vector<double> exact;   // exact l^2 norms per N (NaN when not computed)
  std::string probe_descriptor;
  int probe_count = 0;
};

struct SweepOptions {
  double p = 2.0;
  NormMode mode = NormMode::exact;
  int probe_count = 16;
  std::uint64_t seed = 1;
  double slack = 0.4;
};

/// Norm of make(N) over the N list, fitted against `target_slope`.
DecaySweep norm_sweep(const std::function<LinearOp(double)>& make, const Grid& grid,
                      const std::vector<double>& N_list, double target_slope,
                      const SweepOptions& opt);

/// Throws std::invalid_argument unless 4N <= sqrt(energy_hi) for every N.
void require_headroom(const SchrodingerOp& op, const std::vector<double>& N_list);

/// ||phi_N(sqrt(-Delta)) - phi_N(sqrt(H))||, target slope -alpha.
DecaySweep difference_decay(const SchrodingerOp& op, const Symbol& phi,
                            const std::vector<double>& N_list, double alpha,
                            const SweepOptions& opt);
/// || |grad|^beta (difference) ||, target slope -alpha + beta.
DecaySweep gradient_difference_decay(const SchrodingerOp& op, const Symbol& phi,
                                     const std::vector<double>& N_list, double beta,
                                     double alpha, const SweepOptions& opt);
/// || P_N |grad|^{-1} H^{1/2} - perturbed P_N ||, target slope -alpha.
DecaySweep corollary_decay(const SchrodingerOp& op, const std::vector<double>& N_list,
                           double alpha, const SweepOptions& opt);
/// || |grad|^beta (perturbed I - I) ||, target slope -2 + beta.
DecaySweep i_difference_decay(const SchrodingerOp& op, const std::vector<double>& N_list,
                              double beta, double s, const SweepOptions& opt);

// ---------------------------------------------------------------------------
// Ratio experiments.

/// Mean-zero probes: the standard classes with the k = 0 mode removed.
ProbeSet mean_zero_probes(const Grid& grid, double N, int count, std::uint64_t seed);

/// ||H^{s/2} f||_r / || |grad|^s f||_r.
RatioReport norm_equivalence_ratio(const SchrodingerOp& op, double s, double r,
                                   const ProbeSet& probes);
/// ||H^{-s/2} f||_q / ||f||_p.
RatioReport sobolev_ratio(const SchrodingerOp& op, double s, double p, double q,
                          const ProbeSet& probes);

/// Space-time window [0, T] sampled at `samples` trapezoid nodes.
struct TimeWindow {
  double T = 1.0;
  int samples = 64;
};

/// ||e^{-itH} f||_{L^q_t L^r_x} / ||f||_2 over the window.
RatioReport strichartz_ratio(const SchrodingerOp& op, double q, double r,
                             const TimeWindow& window, const ProbeSet& probes);

struct BilinearPoint {
  double N1 = 0.0;
  double N2 = 0.0;
  RatioReport report;  // ||u1 u2||_{L^2_{t,x}} / (||f1|| ||f2||) per probe pair
};

struct BilinearResult {
  std::vector<BilinearPoint> points;
  /// median ratio at N2 divided by the median at 2 N2, per doubling.
  std::vector<double> doubling_factors;
  double expected_factor = 0.0;  // 2^{1/2}
};

struct BilinearOptions {
  int pairs = 8;
  double packet_width = 2.0;
  double separation = 12.0;  // initial distance of the fast packet
  std::uint64_t seed = 1;
};

/// Linear flows of perturbed-projected wave packets u_i = e^{-itH} P_{N_i} f_i;
/// the fast packet starts `separation` to the left of the slow one.
BilinearResult bilinear_ratio(const SchrodingerOp& op, double N1,
                              const std::vector<double>& N2_list,
                              const TimeWindow& window, const BilinearOptions& opt);

struct EnergyComparison {
  RatioReport upper;  // E[I u] / (N^{2-2s} (1 + ||u||_{H^s}^4))
  RatioReport lower;  // ||u||_{H^s}^2 / (E[I u] + ||u||_2^2)
};

EnergyComparison energy_comparison(const SchrodingerOp& op, const ProbeSet& probes,
                                   double N, double s);

// ---------------------------------------------------------------------------
// Dynamics.

/// Random-phase initial datum with |uhat(k)| ~ (1 + |k|^2)^{-sigma/2},
/// mean zero, optionally band-limited below `band`.
Field power_law_datum(const Grid& grid, double sigma, std::uint64_t seed,
                      double band = 0.0);

/// Scale u so that max_N E[I_N u] = target (energy is quadratic plus
/// quartic in the amplitude, solved exactly).
Field normalize_i_energy(const SchrodingerOp& op, const Field& u,
                         const std::vector<double>& N_list, double s, double target,
                         double kappa = 1.0);

struct AlmostConservation {
  DiagnosticSeries series;
  std::vector<double> drift;  // per N
  DecayFit fit;
  bool monotone = false;
  double floor_margin = 0.0;  // min drift / splitting floor
  int retries = 0;
  bool conclusive = true;
  double dt = 0.0;
};

struct AlmostConservationOptions {
  double delta = 0.1;
  double dt = 0.1 / 2000;
  int snapshot_stride = 100;
  double kappa = 1.0;
  double monotone_tol = 0.2;
  double target_slope = -1.0;
  double slack = 0.3;
  double floor_ratio = 10.0;
  int max_retries = 1;
  int shadow_steps = 32;
};

AlmostConservation almost_conservation_sweep(const SchrodingerOp& op, const Field& u0,
                                             double s, const std::vector<double>& N_list,
                                             const AlmostConservationOptions& opt);

struct HalvingStudy {
  std::vector<double> dt;
  std::vector<double> energy_drift;
  std::vector<double> mass_drift;
  double ratio = 0.0;  // drift(dt) / drift(dt/2), first halving
};

/// Energy drift of evolve runs at dt, dt/2, ... (`levels` values).
HalvingStudy dt_halving(const SchrodingerOp& op, const Field& u0, double dt,
                        double t_final, int levels, double kappa = 1.0);

// ---------------------------------------------------------------------------
// Coercivity, resonance and scattering.

struct CoercivityResult {
  double kato_negative = 0.0;  // ||V_-||_K
  double constant = 0.0;       // 1 - ||V_-||_K / (4 pi)
  bool hypothesis = false;
  int violations = 0;
  RatioReport ratios;          // <Hf, f> / ||grad f||^2 per probe
  double ground_ratio = 0.0;   // of the mean-zero ground state
  double worst_ratio = 0.0;    // of the Birman-Schwinger extremal probe
  double min_margin = 0.0;     // min of <Hf,f> - c ||grad f||^2, normalized
};

struct CoercivityOptions {
  int random_probes = 1000;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  int lanczos_iter = 200;
};

CoercivityResult coercivity_check(const SchrodingerOp& op, const CoercivityOptions& opt);

struct ResonanceResult {
  double eps = 0.0;
  std::vector<double> bs_eigenvalues;  // largest few, extrapolated to eps -> 0
  double top = 0.0;                    // largest extrapolated eigenvalue
  double top_eps = 0.0;                // at eps
  double top_half = 0.0;               // at eps/2
  bool resonant = false;               // |top - 1| <= tol, stable in eps
  bool supercritical = false;          // top > 1 + tol
  double lowest_energy = 0.0;          // lowest eigenvalue of mean-zero H
};

/// Birman-Schwinger operator -(-Delta + eps)^{-1/2} V (-Delta + eps)^{-1/2}
/// on mean-zero lattice functions (dense, Fourier basis).
ResonanceResult resonance_check(const Potential& v, double eps, double tol = 0.02,
                                int keep = 5);

struct LippmannSchwingerConfig {
  double tol = 1e-8;
  int max_iter = 200;
  double relaxation = 1.0;
};

struct LippmannSchwingerResult {
  Field e;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> history;
  double scattered = 0.0;  // ||e - e0||_2 / ||e0||_2
};

/// e = e0 - G0 (V e) with the outgoing free-space kernel, relaxed Born
/// iteration, non-periodic convolution.  3d only.
LippmannSchwingerResult lippmann_schwinger_solve(const Potential& v,
                                                 const std::array<double, 3>& xi,
                                                 const LippmannSchwingerConfig& cfg);

// ---------------------------------------------------------------------------
// Config-driven runners.

struct ExperimentSpec {
  std::string name;
  std::string kind;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json grid;       // {dim, L, n} or null
  nlohmann::json potential;  // factory spec or null
  StrategyConfig strategy;
  std::uint64_t seed = 0;
  std::string path;          // "experiments[i]" for error messages
};

struct ExperimentOutput {
  Verdict verdict;
  std::vector<std::pair<std::string, CsvTable>> tables;
  std::vector<std::pair<std::string, PlotSpec>> plots;
  std::vector<std::pair<std::string, Field>> snapshots;
};

using ExperimentRunner = std::function<ExperimentOutput(const ExperimentSpec&)>;

/// Known experiment kinds.
const std::map<std::string, ExperimentRunner>& experiment_registry();

ExperimentOutput run_experiment(const ExperimentSpec& spec);

/// CSV, SVG, snapshots and verdict.json into `dir`.
void write_experiment_output(const ExperimentOutput& out, const std::string& dir);

/// Validation failure naming the offending config path.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Typed access to experiment params with path-qualified errors.
class Params {
 public:
  Params(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {}
  double number(const std::string& key, double fallback) const;
  double number(const std::string& key) const;
  int integer(const std::string& key, int fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key,
                              const std::vector<double>& fallback) const;
  /// Dyadic ascending list.
  std::vector<double> dyadic_list(const std::string& key,
                                  const std::vector<double>& fallback) const;
  const nlohmann::json* find(const std::string& key) const;
  std::string where(const std::string& key) const { return path_ + "." + key; }

 private:
  const nlohmann::json& j_;
  std::string path_;
};

Grid grid_from_json(const nlohmann::json& j, const std::string& path);
StrategyConfig strategy_from_json(const nlohmann::json& j, const std::string& path);
Symbol symbol_from_json(const nlohmann::json& j, const std::string& path);

}  // namespace kato
