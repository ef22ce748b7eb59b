#pragma once

#include <functional>
#include <memory>
#include <string>

#include <Eigen/Core>

#include "kato/field.hpp"
#include "kato/potential.hpp"

namespace kato {

/// Largest n^dim for which the dense eigendecomposition is offered.
inline constexpr std::size_t kDenseCap = 4096;

enum class Strategy { dense_eig, chebyshev };

const char* to_string(Strategy s);

struct ChebyshevConfig {
  int degree = 0;            // 0 selects the degree automatically
  double tol = 1e-10;        // tail certificate
  bool clamp_at_zero = true;
  int max_degree = 1 << 16;
};

struct StrategyConfig {
  Strategy kind = Strategy::dense_eig;
  ChebyshevConfig chebyshev;
};

/// Eigenpairs of the lattice matrix of H, eigenvalues ascending.
struct DenseSpectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // orthonormal columns in the l^2 lattice basis
  /// Energies at or below this are treated as the clamped bottom of the
  /// spectrum (exact zero energy for V = 0 and leaked negative modes).
  double clamp_threshold = 0.0;
  /// Number of eigenvalues strictly below -clamp_threshold.
  int negative_count = 0;
};

/// H = -Delta + V on a periodic grid.
class SchrodingerOp {
 public:
  using Apply = std::function<Field(const Field&)>;

  explicit SchrodingerOp(Potential v, StrategyConfig strategy = {});

  const Potential& potential() const;
  const Grid& grid() const;
  const StrategyConfig& strategy() const;
  Strategy kind() const { return strategy().kind; }

  /// Spectral enclosure [lo, hi] in energy units.
  double energy_lo() const;
  double energy_hi() const;

  /// Hf = F^{-1}(|k|^2 Ff) + V f.
  Field apply(const Field& f) const;
  Apply as_function() const;

  bool dense_feasible() const { return grid().size() <= kDenseCap; }
  /// Computed on construction for dense_eig, on first request otherwise.
  /// Throws std::invalid_argument above kDenseCap.
  const DenseSpectrum& spectrum() const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

/// Real symmetric lattice matrix of H (n^dim <= kDenseCap).
Eigen::MatrixXd assemble_hamiltonian(const Potential& v);

}  // namespace kato
