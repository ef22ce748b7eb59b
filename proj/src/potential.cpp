#include "kato/potential.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "kato/fft.hpp"
#include "kato/lattice.hpp"
#include "kato/quadrature.hpp"
#include "kato/snapshot.hpp"
#include "kato/symbol.hpp"

namespace kato {

struct Potential::Cache {
  std::mutex mutex;
  std::optional<double> kato;
  std::optional<double> b;
  std::optional<double> linf;
  std::vector<std::pair<double, double>> lp;
  std::vector<std::pair<double, double>> weak_lp;
};

Potential::Potential(RealField values, std::string family, nlohmann::json params,
                     RadialProfile profile)
    : values_(std::move(values)),
      family_(std::move(family)),
      params_(std::move(params)),
      profile_(std::move(profile)),
      cache_(std::make_shared<Cache>()) {
  if (!values_.all_finite()) throw std::invalid_argument("potential is not finite");
}

Potential Potential::zero(const Grid& grid) {
  return Potential(RealField(grid), "zero", nlohmann::json::object(),
                   [](double) { return 0.0; });
}

namespace {

template <typename Fn>
double cached(std::mutex& m, std::optional<double>& slot, Fn&& compute) {
  {
    std::lock_guard<std::mutex> lock(m);
    if (slot) return *slot;
  }
  const double v = compute();
  std::lock_guard<std::mutex> lock(m);
  if (!slot) slot = v;
  return *slot;
}

template <typename Fn>
double cached(std::mutex& m, std::vector<std::pair<double, double>>& table, double p,
              Fn&& compute) {
  {
    std::lock_guard<std::mutex> lock(m);
    for (const auto& [key, val] : table) {
      if (key == p) return val;
    }
  }
  const double v = compute();
  std::lock_guard<std::mutex> lock(m);
  table.emplace_back(p, v);
  return v;
}

}  // namespace

double Potential::kato() const {
  return cached(cache_->mutex, cache_->kato, [&] { return kato_norm(values_); });
}
double Potential::b() const {
  return cached(cache_->mutex, cache_->b, [&] { return b_norm(values_); });
}
double Potential::linf() const {
  return cached(cache_->mutex, cache_->linf,
                [&] { return lp_norm(values_, std::numeric_limits<double>::infinity()); });
}
double Potential::lp(double p) const {
  return cached(cache_->mutex, cache_->lp, p, [&] { return lp_norm(values_, p); });
}
double Potential::weak_lp(double p) const {
  return cached(cache_->mutex, cache_->weak_lp, p,
                [&] { return weak_lp_norm(values_, p); });
}

double kato_diagonal_average(double h) {
  return cube_average_singular(h, [](double) { return std::complex<double>(1.0); })
      .real();
}

KatoEstimate kato_estimate(const RealField& v) {
  const Grid& g = v.grid();
  if (g.dim() != 3) {
    throw std::invalid_argument("kato_norm is 3d-only (grid.dim = " +
                                std::to_string(g.dim()) + ")");
  }
  const int n = g.n();
  const int m = 2 * n;
  const double h = g.spacing();
  const Eigen::Index total = static_cast<Eigen::Index>(m) * m * m;
  auto pad_index = [m](int i, int j, int k) {
    return (static_cast<Eigen::Index>(i) * m + j) * m + k;
  };

  KatoEstimate out;
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(total);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto idx = g.unflatten(p);
    const double val = std::abs(v[static_cast<Eigen::Index>(p)]);
    a[pad_index(idx[0], idx[1], idx[2])] = val;
    if (val != 0.0) {
      for (int ax = 0; ax < 3; ++ax) {
        if (idx[ax] == 0 || idx[ax] == n - 1) out.touches_boundary = true;
      }
    }
  }
  if (a.cwiseAbs().maxCoeff() == 0.0) return out;

  Eigen::VectorXcd kernel(total);
  const double diag = kato_diagonal_average(h);
  for (int i = 0; i < m; ++i) {
    const int oi = i < n ? i : i - m;
    for (int j = 0; j < m; ++j) {
      const int oj = j < n ? j : j - m;
      for (int k = 0; k < m; ++k) {
        const int ok = k < n ? k : k - m;
        const double r2 = double(oi) * oi + double(oj) * oj + double(ok) * ok;
        kernel[pad_index(i, j, k)] = r2 == 0.0 ? diag : 1.0 / (h * std::sqrt(r2));
      }
    }
  }
  fft_in_place(a, 3, m, false);
  fft_in_place(kernel, 3, m, false);
  a.array() *= kernel.array();
  fft_in_place(a, 3, m, true);
  const double scale = h * h * h / static_cast<double>(total);

  out.value = -1.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto idx = g.unflatten(p);
    const double val = a[pad_index(idx[0], idx[1], idx[2])].real() * scale;
    if (val > out.value) {
      out.value = val;
      out.argmax = p;
    }
  }
  return out;
}

double kato_norm(const RealField& v) { return kato_estimate(v).value; }

double kato_norm(const Potential& v) { return v.kato(); }

double kato_norm_3d_lift(const Potential& v, int max_n) {
  if (v.grid().dim() == 3) return v.kato();
  if (v.family() == "gaussian_well" && !v.params().contains("truncate")) {
    const double d = v.params().at("depth").get<double>();
    const double w = v.params().at("width").get<double>();
    return 2.0 * std::numbers::pi * std::abs(d) * w * w;
  }
  if (!v.has_profile()) {
    throw std::invalid_argument("3d lift needs an analytic potential profile");
  }
  const Grid g3 = Grid::make(3, v.grid().half_period(), std::min(v.grid().n(), max_n));
  const auto& prof = v.profile();
  const RealField lifted = sample_real(g3, [&](const std::array<double, 3>& x) {
    return prof(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  });
  return kato_norm(lifted);
}

double b_norm(const RealField& v) {
  const Grid& g = v.grid();
  const int k0 = static_cast<int>(std::floor(std::log2(g.spacing())));
  std::vector<double> shells;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double val = v[static_cast<Eigen::Index>(p)];
    if (val == 0.0) continue;
    const double r = g.radius(p);
    int k = k0;
    if (r >= std::ldexp(1.0, k0 + 1)) {
      k = std::ilogb(r);  // 2^k <= r < 2^{k+1}
    }
    const std::size_t slot = static_cast<std::size_t>(k - k0);
    if (slot >= shells.size()) shells.resize(slot + 1, 0.0);
    shells[slot] += val * val;
  }
  double sum = 0.0;
  for (std::size_t s = 0; s < shells.size(); ++s) {
    if (shells[s] == 0.0) continue;
    const int k = k0 + static_cast<int>(s);
    sum += std::sqrt(std::ldexp(1.0, k)) * std::sqrt(shells[s] * g.cell_volume());
  }
  return sum;
}

double b_norm(const Potential& v) { return v.b(); }

RealField negative_part(const RealField& v) {
  return RealField(v.grid(), v.values().cwiseMin(0.0));
}

Potential negative_part(const Potential& v) {
  RadialProfile prof;
  if (v.has_profile()) {
    prof = [p = v.profile()](double r) { return std::min(p(r), 0.0); };
  }
  nlohmann::json params = {{"of", v.family()}, {"params", v.params()}};
  return Potential(negative_part(v.field()), "negative_part", params, prof);
}

double weak_lp_norm(const RealField& v, double p) {
  if (!(p > 1.0) || std::isinf(p)) {
    throw std::invalid_argument("weak_lp_norm: p must lie in (1, inf)");
  }
  std::vector<double> a(v.values().data(), v.values().data() + v.size());
  for (double& x : a) x = std::abs(x);
  std::sort(a.begin(), a.end(), std::greater<>());
  const double cell = v.grid().cell_volume();
  double best = 0.0;
  for (std::size_t i = 0; i < a.size() && a[i] > 0.0; ++i) {
    best = std::max(best, a[i] * std::pow(static_cast<double>(i + 1) * cell, 1.0 / p));
  }
  return best;
}

Field spectral_refine(const Field& f, int r) {
  if (r < 1 || !is_power_of_two(r)) {
    throw std::invalid_argument("spectral_refine: factor must be 2^j");
  }
  if (r == 1) return f;
  const Grid& g = f.grid();
  const Grid fine = Grid::make(g.dim(), g.half_period(), g.n() * r,
                               std::max(kDefaultPointCap, g.size() * r * r * r));
  const Eigen::VectorXcd coeffs = forward_transform(f);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(fine.size()));
  const int n = g.n();
  const int nf = fine.n();
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto idx = g.unflatten(p);
    // Signed modes; the Nyquist mode -n/2 is split between +-n/2.
    std::array<std::array<int, 2>, 3> targets{};
    std::array<int, 3> count{1, 1, 1};
    int splits = 0;
    for (int a = 0; a < g.dim(); ++a) {
      const int j = idx[a] < n / 2 ? idx[a] : idx[a] - n;
      if (j == -n / 2) {
        targets[a] = {nf - n / 2, n / 2};
        count[a] = 2;
        ++splits;
      } else {
        targets[a] = {j < 0 ? j + nf : j, 0};
      }
    }
    const Complex c = coeffs[static_cast<Eigen::Index>(p)] / std::ldexp(1.0, splits);
    for (int i0 = 0; i0 < count[0]; ++i0) {
      for (int i1 = 0; i1 < count[1]; ++i1) {
        for (int i2 = 0; i2 < count[2]; ++i2) {
          std::array<int, 3> t{targets[0][i0], targets[1][i1], targets[2][i2]};
          out[static_cast<Eigen::Index>(fine.flatten(t))] += c;
        }
      }
    }
  }
  return inverse_transform(fine, out);
}

Potential scale_potential(const Potential& v, double r) {
  if (!is_dyadic(r) || r < 1.0) {
    throw std::invalid_argument("scale_potential: r must be 2^j with j >= 0");
  }
  if (r == 1.0) return v;
  const int ri = static_cast<int>(r);
  const Grid& g = v.grid();
  const Grid target = Grid::make(g.dim(), g.half_period() * r, g.n() * ri);
  nlohmann::json params = v.params();
  params["scale_r"] = r;
  if (v.has_profile()) {
    RadialProfile prof = [p = v.profile(), r](double rad) { return p(rad / r) / (r * r); };
    RealField values = sample_real(target, [&](const std::array<double, 3>& x) {
      double rad = 0.0;
      for (int a = 0; a < g.dim(); ++a) rad += x[a] * x[a];
      return prof(std::sqrt(rad));
    });
    return Potential(std::move(values), v.family(), params, prof);
  }
  // V(x / r) on the target lattice equals V on the r-times refined lattice
  // of the original box, index for index.
  const Field refined = spectral_refine(to_complex(v.field()), ri);
  RealField values(target, refined.values().real() / (r * r));
  return Potential(std::move(values), v.family(), params);
}

namespace {

double param(const nlohmann::json& spec, const char* key) {
  if (!spec.contains(key) || !spec.at(key).is_number()) {
    throw std::invalid_argument(std::string("potential.") + key +
                                ": missing or not a number");
  }
  return spec.at(key).get<double>();
}

double param_or(const nlohmann::json& spec, const char* key, double fallback) {
  return spec.contains(key) ? param(spec, key) : fallback;
}

}  // namespace

Potential potential_factory(const Grid& grid, const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("family")) {
    throw std::invalid_argument("potential.family: missing");
  }
  const std::string family = spec.at("family").get<std::string>();
  nlohmann::json params = spec;
  params.erase("family");

  RadialProfile prof;
  if (family == "zero") {
    prof = [](double) { return 0.0; };
  } else if (family == "constant") {
    const double c = param(spec, "value");
    prof = [c](double) { return c; };
  } else if (family == "gaussian_well") {
    const double d = param(spec, "depth");
    const double w = param(spec, "width");
    if (!(w > 0.0)) throw std::invalid_argument("potential.width: must be > 0");
    prof = [d, w](double r) { return d * std::exp(-r * r / (w * w)); };
  } else if (family == "inverse_poly") {
    const double c = param(spec, "c");
    const double sigma = param(spec, "sigma");
    if (!(sigma > 0.0)) throw std::invalid_argument("potential.sigma: must be > 0");
    prof = [c, sigma](double r) { return c * std::pow(1.0 + r * r, -sigma / 2.0); };
  } else if (family == "oscillatory") {
    const double c = param(spec, "c");
    const double omega = param(spec, "omega");
    prof = [c, omega](double r) {
      return c * std::cos(omega * r) * std::pow(1.0 + r * r, -1.5);
    };
  } else if (family == "shell_indicator") {
    const double lo = param_or(spec, "r_in", 0.0);
    const double hi = param(spec, "r_out");
    const double value = param_or(spec, "value", 1.0);
    prof = [lo, hi, value](double r) { return (r >= lo && r < hi) ? value : 0.0; };
  } else if (family == "snapshot") {
    if (!spec.contains("path")) throw std::invalid_argument("potential.path: missing");
    RealField f = read_real_snapshot(spec.at("path").get<std::string>());
    if (f.grid() != grid) throw std::invalid_argument("potential.path: grid mismatch");
    return Potential(std::move(f), family, params);
  } else if (family == "samples") {
    if (!spec.contains("values") || !spec.at("values").is_array()) {
      throw std::invalid_argument("potential.values: missing");
    }
    const auto& arr = spec.at("values");
    if (arr.size() != grid.size()) {
      throw std::invalid_argument("potential.values: expected " +
                                  std::to_string(grid.size()) + " samples");
    }
    RealField f(grid);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      f[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    }
    params.erase("values");
    return Potential(std::move(f), family, params);
  } else {
    throw std::invalid_argument("potential.family: unknown family '" + family + "'");
  }

  if (spec.contains("truncate")) {
    const double cut = param(spec, "truncate");
    prof = [inner = prof, cut](double r) { return r < cut ? inner(r) : 0.0; };
  }
  RealField values = sample_real(grid, [&](const std::array<double, 3>& x) {
    double r2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) r2 += x[a] * x[a];
    return prof(std::sqrt(r2));
  });
  return Potential(std::move(values), family, params, prof);
}

}  // namespace kato
