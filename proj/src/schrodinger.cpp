#include "kato/schrodinger.hpp"

#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>

#include "kato/fft.hpp"

namespace kato {

const char* to_string(Strategy s) {
  return s == Strategy::dense_eig ? "dense_eig" : "chebyshev";
}

struct SchrodingerOp::State {
  Potential potential;
  StrategyConfig strategy;
  double lo = 0.0;
  double hi = 0.0;
  Eigen::VectorXcd ksq;
  std::once_flag dense_once;
  std::unique_ptr<DenseSpectrum> dense;

  State(Potential v, StrategyConfig s) : potential(std::move(v)), strategy(s) {}
};

const Potential& SchrodingerOp::potential() const { return state_->potential; }
const Grid& SchrodingerOp::grid() const { return state_->potential.grid(); }
const StrategyConfig& SchrodingerOp::strategy() const { return state_->strategy; }
double SchrodingerOp::energy_lo() const { return state_->lo; }
double SchrodingerOp::energy_hi() const { return state_->hi; }

SchrodingerOp::SchrodingerOp(Potential v, StrategyConfig strategy)
    : state_(std::make_shared<State>(std::move(v), strategy)) {
  const Grid& g = grid();
  const double kmax = g.axis_k_max();
  state_->hi = g.dim() * kmax * kmax + std::max(potential().max(), 0.0);
  state_->lo = std::min(0.0, potential().min());
  state_->ksq = g.k_squared().cast<Complex>();
  if (strategy.kind == Strategy::dense_eig) {
    if (!dense_feasible()) {
      throw std::invalid_argument("dense infeasible for n^dim = " +
                                  std::to_string(g.size()) +
                                  " > 4096, chebyshev required");
    }
    spectrum();
  }
}

Field SchrodingerOp::apply(const Field& f) const {
  require_same_grid(f.grid(), grid());
  Eigen::VectorXcd coeffs = forward_transform(f);
  coeffs.array() *= state_->ksq.array();
  Field out = inverse_transform(f.grid(), coeffs);
  out.values().array() +=
      f.values().array() * potential().values().array().cast<Complex>();
  return out;
}

SchrodingerOp::Apply SchrodingerOp::as_function() const {
  return [op = *this](const Field& f) { return op.apply(f); };
}

Eigen::MatrixXd assemble_hamiltonian(const Potential& v) {
  const Grid& g = v.grid();
  if (g.size() > kDenseCap) {
    throw std::invalid_argument("dense infeasible for n^dim = " +
                                std::to_string(g.size()) +
                                " > 4096, chebyshev required");
  }
  const auto size = static_cast<Eigen::Index>(g.size());
  // The lattice Laplacian is a convolution; its kernel is H applied to the
  // delta at the first lattice point.
  Eigen::VectorXcd delta_hat =
      g.k_squared().cast<Complex>() / static_cast<double>(g.size());
  const Eigen::VectorXd kernel = inverse_transform(g, delta_hat).values().real();

  Eigen::MatrixXd h(size, size);
  const int n = g.n();
  for (Eigen::Index q = 0; q < size; ++q) {
    const auto iq = g.unflatten(static_cast<std::size_t>(q));
    for (Eigen::Index p = 0; p < size; ++p) {
      const auto ip = g.unflatten(static_cast<std::size_t>(p));
      std::array<int, 3> d{};
      for (int a = 0; a < g.dim(); ++a) d[a] = ((iq[a] - ip[a]) % n + n) % n;
      h(q, p) = kernel[static_cast<Eigen::Index>(g.flatten(d))];
    }
  }
  h.diagonal() += v.values();
  return 0.5 * (h + h.transpose());
}

namespace {

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = seed;
  for (std::size_t i = 0; i < len; ++i) {
    hash ^= bytes[i];
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string cache_path(const Potential& v) {
  const char* dir = std::getenv("KATO_SPECTRAL_CACHE");
  if (dir == nullptr || *dir == '\0') return {};
  const Grid& g = v.grid();
  std::uint64_t hash = 14695981039346656037ULL;
  const int dim = g.dim();
  const int n = g.n();
  const double L = g.half_period();
  hash = fnv1a(&dim, sizeof dim, hash);
  hash = fnv1a(&n, sizeof n, hash);
  hash = fnv1a(&L, sizeof L, hash);
  hash = fnv1a(v.values().data(), sizeof(double) * v.values().size(), hash);
  std::ostringstream name;
  name << "spectrum-" << std::hex << hash << ".bin";
  return (std::filesystem::path(dir) / name.str()).string();
}

bool load_cached(const std::string& path, Eigen::Index size, DenseSpectrum& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::int64_t stored = 0;
  in.read(reinterpret_cast<char*>(&stored), sizeof stored);
  if (!in || stored != size) return false;
  out.eigenvalues.resize(size);
  out.eigenvectors.resize(size, size);
  in.read(reinterpret_cast<char*>(out.eigenvalues.data()),
          static_cast<std::streamsize>(sizeof(double) * size));
  in.read(reinterpret_cast<char*>(out.eigenvectors.data()),
          static_cast<std::streamsize>(sizeof(double) * size * size));
  return static_cast<bool>(in);
}

void store_cached(const std::string& path, const DenseSpectrum& s) {
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  const std::string tmp =
      path + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) return;
    const std::int64_t size = s.eigenvalues.size();
    out.write(reinterpret_cast<const char*>(&size), sizeof size);
    out.write(reinterpret_cast<const char*>(s.eigenvalues.data()),
              static_cast<std::streamsize>(sizeof(double) * size));
    out.write(reinterpret_cast<const char*>(s.eigenvectors.data()),
              static_cast<std::streamsize>(sizeof(double) * size * size));
    if (!out) return;
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
}

void validate(const DenseSpectrum& s, double lo, double hi) {
  const double slack = 1e-9 * std::max(1.0, hi - lo);
  if (s.eigenvalues.minCoeff() < lo - slack || s.eigenvalues.maxCoeff() > hi + slack) {
    throw std::runtime_error("dense spectrum escapes the spectral bounds");
  }
  const Eigen::Index size = s.eigenvectors.cols();
  const Eigen::Index stride = std::max<Eigen::Index>(1, size / 8);
  for (Eigen::Index c = 0; c < size; c += stride) {
    Eigen::VectorXd dots = s.eigenvectors.transpose() * s.eigenvectors.col(c);
    dots[c] -= 1.0;
    if (dots.cwiseAbs().maxCoeff() > 1e-10) {
      throw std::runtime_error("dense eigenvectors are not orthonormal");
    }
  }
}

}  // namespace

const DenseSpectrum& SchrodingerOp::spectrum() const {
  std::call_once(state_->dense_once, [this] {
    auto s = std::make_unique<DenseSpectrum>();
    const auto size = static_cast<Eigen::Index>(grid().size());
    const std::string path = cache_path(potential());
    bool loaded = !path.empty() && load_cached(path, size, *s);
    if (!loaded) {
      const Eigen::MatrixXd h = assemble_hamiltonian(potential());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
      if (solver.info() != Eigen::Success) {
        throw std::runtime_error("dense eigendecomposition failed");
      }
      s->eigenvalues = solver.eigenvalues();
      s->eigenvectors = solver.eigenvectors();
    }
    validate(*s, state_->lo, state_->hi);
    if (!loaded && !path.empty()) store_cached(path, *s);
    s->clamp_threshold = 1e-9 * (state_->hi - state_->lo);
    s->negative_count = static_cast<int>(
        (s->eigenvalues.array() < -s->clamp_threshold).count());
    state_->dense = std::move(s);
  });
  if (!state_->dense) throw std::runtime_error("dense spectrum unavailable");
  return *state_->dense;
}

}  // namespace kato
