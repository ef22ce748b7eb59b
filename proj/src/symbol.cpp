#include "kato/symbol.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kato {

const char* to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::dyadic_bump:
      return "dyadic_bump";
    case SymbolKind::i_symbol:
      return "i_symbol";
    case SymbolKind::propagator:
      return "propagator";
    case SymbolKind::power:
      return "power";
    case SymbolKind::custom:
      return "custom";
  }
  return "unknown";
}

Symbol::Symbol(SymbolKind kind, std::string name, Fn radial, double support_lo,
               double support_hi)
    : kind_(kind),
      name_(std::move(name)),
      radial_(std::move(radial)),
      support_lo_(support_lo),
      support_hi_(support_hi) {}

Complex Symbol::at_energy(double energy) const {
  if (energy_) return energy_(energy);
  return radial_(std::sqrt(std::max(energy, 0.0)));
}

Symbol Symbol::with_energy_form(Fn energy) const {
  Symbol s = *this;
  s.energy_ = std::move(energy);
  return s;
}

Symbol Symbol::with_params(const SymbolParams& p) const {
  Symbol s = *this;
  s.params_ = p;
  return s;
}

Symbol Symbol::with_smoothness_scale(double scale) const {
  Symbol s = *this;
  s.smoothness_ = scale;
  return s;
}

Symbol Symbol::with_real_valued(bool real) const {
  Symbol s = *this;
  s.real_ = real;
  return s;
}

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double low_cutoff(double lambda) { return smooth_step(2.0 - lambda); }

double dyadic_profile(double lambda) {
  return low_cutoff(lambda) - low_cutoff(2.0 * lambda);
}

bool is_dyadic(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) return false;
  int e = 0;
  return std::frexp(v, &e) == 0.5;
}

Symbol identity_symbol() {
  return Symbol(SymbolKind::custom, "identity", [](double) { return Complex(1.0); })
      .with_energy_form([](double) { return Complex(1.0); });
}

Symbol dyadic_bump(double N) {
  if (!is_dyadic(N)) throw std::invalid_argument("dyadic_bump: N must be 2^j");
  std::ostringstream name;
  name << "chi_" << N;
  SymbolParams p;
  p.N = N;
  return Symbol(SymbolKind::dyadic_bump, name.str(),
                [N](double l) { return Complex(dyadic_profile(l / N)); },
                N / 2, 2 * N)
      .with_params(p)
      .with_smoothness_scale(N / 4);
}

Symbol rescaled(const Symbol& profile, double N) {
  std::ostringstream name;
  name << profile.name() << "@" << N;
  Symbol s(profile.kind(), name.str(),
           [profile, N](double l) { return profile(l / N); },
           profile.support_lo() * N, profile.support_hi() * N);
  SymbolParams p = profile.params();
  p.N = N;
  return s.with_params(p)
      .with_smoothness_scale(profile.smoothness_scale() * N)
      .with_real_valued(profile.real_valued());
}

double i_weight(double M, double N, double s) {
  if (M <= N) return 1.0;
  return std::pow(N / M, 1.0 - s);
}

namespace {

// Dyadic M with chi_M(lambda) possibly nonzero: M in (lambda/2, 2 lambda).
template <typename Fn>
void for_each_active_scale(double lambda, Fn&& fn) {
  int e = 0;
  std::frexp(lambda, &e);  // lambda in [2^{e-1}, 2^e)
  for (int j = e - 2; j <= e + 1; ++j) fn(std::ldexp(1.0, j));
}

double i_symbol_value(double lambda, double N, double s) {
  if (lambda <= 0.0) return 1.0;
  // 1 - sum_M (1 - m_N(M)) chi_M: the M <= N terms vanish identically.
  double defect = 0.0;
  for_each_active_scale(lambda, [&](double M) {
    if (M > N) defect += (1.0 - i_weight(M, N, s)) * dyadic_profile(lambda / M);
  });
  return 1.0 - defect;
}

}  // namespace

Symbol i_symbol(double N, double s) {
  if (!is_dyadic(N)) throw std::invalid_argument("i_symbol: N must be 2^j");
  if (!(s > 0.5 && s < 1.0)) {
    throw std::invalid_argument("i_symbol: s must lie in (1/2, 1)");
  }
  std::ostringstream name;
  name << "m_" << N << "_s" << s;
  SymbolParams p;
  p.N = N;
  p.s = s;
  return Symbol(SymbolKind::i_symbol, name.str(),
                [N, s](double l) { return Complex(i_symbol_value(l, N, s)); })
      .with_params(p)
      .with_smoothness_scale(N / 4);
}

Symbol q_symbol(double M, double N, double s) {
  if (!is_dyadic(M) || !is_dyadic(N)) {
    throw std::invalid_argument("q_symbol: M and N must be dyadic");
  }
  std::ostringstream name;
  name << "qchi_" << M << "_N" << N << "_s" << s;
  SymbolParams p;
  p.N = M;
  p.s = s;
  const double weight = i_weight(M, N, s);
  return Symbol(SymbolKind::dyadic_bump, name.str(),
                [M, N, s, weight](double l) {
                  if (l <= 0.0) return Complex(0.0);
                  const double c = dyadic_profile(l / M);
                  if (c == 0.0) return Complex(0.0);
                  return Complex(weight * c / i_symbol_value(l, N, s));
                },
                M / 2, 2 * M)
      .with_params(p)
      .with_smoothness_scale(M / 4);
}

Symbol propagator_symbol(double t) {
  std::ostringstream name;
  name << "exp(-i" << t << "l^2)";
  SymbolParams p;
  p.t = t;
  return Symbol(SymbolKind::propagator, name.str(),
                [t](double l) { return std::polar(1.0, -t * l * l); })
      .with_energy_form([t](double e) { return std::polar(1.0, -t * e); })
      .with_params(p)
      .with_real_valued(t == 0.0);
}

Symbol power_symbol(double s) {
  std::ostringstream name;
  name << "l^" << s;
  SymbolParams p;
  p.exponent = s;
  Symbol sym(SymbolKind::power, name.str(), [s](double l) {
    if (l <= 0.0) return Complex(s == 0.0 ? 1.0 : 0.0);
    return Complex(std::pow(l, s));
  });
  sym = sym.with_params(p);
  const double half = s / 2.0;
  if (s >= 0.0 && half == std::floor(half)) {
    const int k = static_cast<int>(half);
    sym = sym.with_energy_form([k](double e) {
      double v = 1.0;
      for (int i = 0; i < k; ++i) v *= e;
      return Complex(v);
    });
  }
  return sym;
}

Symbol smooth_bump(double a, double b) {
  if (!(a > 0.0 && b > a)) {
    throw std::invalid_argument("smooth_bump: need 0 < a < b");
  }
  const double w = (b - a) / 4.0;
  std::ostringstream name;
  name << "bump[" << a << "," << b << "]";
  return Symbol(SymbolKind::custom, name.str(),
                [a, b, w](double l) {
                  return Complex(smooth_step((l - a) / w) *
                                 smooth_step((b - l) / w));
                },
                a, b)
      .with_smoothness_scale(w);
}

Symbol product(const Symbol& a, const Symbol& b) {
  Symbol s(SymbolKind::custom, a.name() + "*" + b.name(),
           [a, b](double l) { return a(l) * b(l); },
           std::max(a.support_lo(), b.support_lo()),
           std::min(a.support_hi(), b.support_hi()));
  if (a.has_energy_form() || b.has_energy_form()) {
    s = s.with_energy_form(
        [a, b](double e) { return a.at_energy(e) * b.at_energy(e); });
  }
  double scale = a.smoothness_scale();
  if (scale == 0.0 || (b.smoothness_scale() > 0.0 && b.smoothness_scale() < scale)) {
    scale = b.smoothness_scale();
  }
  return s.with_smoothness_scale(scale).with_real_valued(a.real_valued() &&
                                                         b.real_valued());
}

std::vector<double> DyadicRange::values() const {
  std::vector<double> out;
  for (int j = j_lo; j <= j_hi; ++j) out.push_back(std::ldexp(1.0, j));
  return out;
}

bool DyadicRange::contains(double N) const {
  if (!is_dyadic(N)) return false;
  const int j = static_cast<int>(std::lround(std::log2(N)));
  return j >= j_lo && j <= j_hi;
}

DyadicRange dyadic_range(double lo, double hi) {
  if (!(lo > 0.0) || !(hi >= lo)) {
    throw std::invalid_argument("dyadic_range: need 0 < lo <= hi");
  }
  DyadicRange r;
  r.j_lo = static_cast<int>(std::ceil(std::log2(lo))) - 1;
  r.j_hi = static_cast<int>(std::ceil(std::log2(hi)));
  return r;
}

DyadicRange dyadic_range(const Grid& grid) {
  return dyadic_range(grid.k_min(), grid.k_max());
}

double partition_check(const Grid& grid) {
  const auto scales = dyadic_range(grid).values();
  double worst = 0.0;
  const auto& kabs = grid.k_abs();
  for (Eigen::Index p = 0; p < kabs.size(); ++p) {
    const double l = kabs[p];
    if (l <= 0.0) continue;
    double sum = 0.0;
    for (double N : scales) sum += dyadic_profile(l / N);
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

}  // namespace kato
