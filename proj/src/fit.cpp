#include "kato/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kato {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line: need two or more paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

LineFit fit_loglog(const std::vector<double>& N, const std::vector<double>& value) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < N.size(); ++i) {
    if (!(N[i] > 0.0) || !(value[i] > 0.0)) {
      throw std::invalid_argument("fit_loglog: values must be positive");
    }
    lx.push_back(std::log(N[i]));
    ly.push_back(std::log(value[i]));
  }
  return fit_line(lx, ly);
}

DecayFit decay_fit(std::vector<double> N, std::vector<double> value,
                   double target_slope, double slack, double zero_floor) {
  if (N.size() != value.size() || N.size() < 4) {
    throw std::invalid_argument("decay_fit: need at least 4 dyadic points");
  }
  DecayFit d;
  d.N = std::move(N);
  d.value = std::move(value);
  d.target_slope = target_slope;
  d.slack = slack;
  const double largest = *std::max_element(d.value.begin(), d.value.end());
  if (largest <= zero_floor) {
    d.skipped = true;
    d.pass = true;
    return d;
  }
  d.fit = fit_loglog(d.N, d.value);
  d.pass = std::isfinite(d.fit.slope) && d.fit.slope <= target_slope + slack;
  return d;
}

RatioReport ratio_report(std::vector<std::string> labels, std::vector<double> ratios,
                         bool require_positive) {
  if (ratios.empty()) throw std::invalid_argument("ratio_report: no ratios");
  for (double r : ratios) {
    if (!std::isfinite(r) || (require_positive && !(r > 0.0))) {
      throw std::invalid_argument("ratio_report: ratio not positive and finite");
    }
  }
  RatioReport rep;
  rep.labels = std::move(labels);
  rep.ratios = std::move(ratios);
  std::vector<double> sorted = rep.ratios;
  std::sort(sorted.begin(), sorted.end());
  rep.min = sorted.front();
  rep.max = sorted.back();
  const std::size_t mid = sorted.size() / 2;
  rep.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return rep;
}

bool monotone_nonincreasing(const std::vector<double>& v, double tol) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > (1.0 + tol) * v[i - 1]) return false;
  }
  return true;
}

}  // namespace kato
