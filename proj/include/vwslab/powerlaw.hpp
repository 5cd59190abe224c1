#pragma once

// Least-squares fits of log(value) against log(1/eps) and the verdict rules
// for moderate / negligible nets.

#include <span>
#include <string>

namespace vwslab {

/// Values below this are replaced by it before taking logarithms.
inline constexpr double kFitFloor = 1e-300;

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// 1 when the values are exactly constant.
  double r_squared = 1.0;
  std::size_t points = 0;
};

/// Fits log v = intercept + slope * log(1/eps); needs at least two points.
PowerLawFit fit_loglog(std::span<const double> eps, std::span<const double> values, double floor = kFitFloor);

struct VerdictThresholds {
  double r2_min = 0.9;
  /// Slopes at or below this count as bounded norms.
  double bounded_slope = 0.1;
  /// Allowed shortfall of a measured decay against the imposed order q.
  double negligible_slack = 0.5;
  /// Smallest decay (-slope) classified as negligible.
  double min_negligible_decay = 0.5;
  double consistency_tol = 1e-3;
  double classical_spread = 0.10;
  /// Errors below this count as converged in monotonicity checks.
  double monotone_floor = 1e-10;
};

enum class VerdictKind { moderate, negligible, indeterminate };
std::string to_string(VerdictKind k);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  VerdictKind verdict = VerdictKind::indeterminate;
  /// N^ for moderate, q^ for negligible, 0 otherwise.
  double exponent = 0.0;

  /// Negligible nets are moderate as well.
  bool is_moderate() const { return verdict != VerdictKind::indeterminate; }
  std::string describe() const;
};

/// negligible(q^ = -slope) when -slope >= min_negligible_decay with r^2 >= r2_min;
/// moderate(ceil(max(slope, 0))) when r^2 >= r2_min or slope <= bounded_slope;
/// indeterminate otherwise.
FitResult classify(const PowerLawFit& fit, const VerdictThresholds& th = {});

}  // namespace vwslab
