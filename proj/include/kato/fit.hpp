#pragma once

#include <string>
#include <vector>

namespace kato {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least squares y = slope * x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);
/// Fit of log(value) against log(N).  Requires positive values.
LineFit fit_loglog(const std::vector<double>& N, const std::vector<double>& value);

struct DecayFit {
  std::vector<double> N;
  std::vector<double> value;
  LineFit fit;
  double target_slope = 0.0;
  double slack = 0.4;
  /// All values at or below the zero floor: the fit is skipped and passes.
  bool skipped = false;
  bool pass = false;
};

/// Fit and verdict: pass when slope <= target + slack.  Needs >= 4 points.
DecayFit decay_fit(std::vector<double> N, std::vector<double> value,
                   double target_slope, double slack = 0.4, double zero_floor = 1e-10);

struct RatioReport {
  std::vector<std::string> labels;
  std::vector<double> ratios;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  /// max / min, the spread tested by boundedness verdicts.
  double spread() const { return min > 0.0 ? max / min : 0.0; }
};

/// Throws unless every ratio is finite, and positive when `require_positive`.
RatioReport ratio_report(std::vector<std::string> labels, std::vector<double> ratios,
                         bool require_positive = true);

/// True when each value is at most (1 + tol) times its predecessor.
bool monotone_nonincreasing(const std::vector<double>& v, double tol);

}  // namespace kato
