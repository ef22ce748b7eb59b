#include "kato/lanczos.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace kato {

namespace {

double l2(const Eigen::VectorXcd& v) { return v.norm(); }

}  // namespace

Eigenpair lanczos_extreme(const LinearOp& a, const Field& start, bool smallest,
                          int max_iter, double tol) {
  const Grid grid = start.grid();
  const Eigen::Index size = start.size();
  max_iter = static_cast<int>(std::min<Eigen::Index>(max_iter, size));
  std::vector<Eigen::VectorXcd> basis;
  std::vector<double> alpha;
  std::vector<double> beta;

  Eigen::VectorXcd q = start.values();
  const double n0 = l2(q);
  if (n0 == 0.0) throw std::invalid_argument("lanczos: zero start vector");
  q /= n0;

  for (int it = 0; it < max_iter; ++it) {
    basis.push_back(q);
    Eigen::VectorXcd w = a(Field(grid, q)).values();
    alpha.push_back(q.dot(w).real());
    // Full reorthogonalization, twice for stability.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) w -= b * b.dot(w);
    }
    const double b = l2(w);

    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const int pick = smallest ? 0 : m - 1;
    const double theta = es.eigenvalues()[pick];
    const Eigen::VectorXd y = es.eigenvectors().col(pick);
    const double resid = std::abs(b * y[m - 1]);

    const bool done = resid <= tol * std::max(std::abs(theta), 1e-300) ||
                      b <= 1e-14 * std::max(std::abs(theta), 1.0) || it + 1 == max_iter;
    if (done) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(size);
      for (int i = 0; i < m; ++i) v += y[i] * basis[i];
      Field vec(grid, v);
      const Eigen::VectorXcd r = a(vec).values() - theta * v;
      return Eigenpair{theta, std::move(vec), l2(r) / l2(v)};
    }
    beta.push_back(b);
    q = w / b;
  }
  throw std::logic_error("lanczos: no iterations");
}

}  // namespace kato
