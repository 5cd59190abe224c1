#include "vwslab/powerlaw.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "vwslab/errors.hpp"

namespace vwslab {

PowerLawFit fit_loglog(std::span<const double> eps, std::span<const double> values, double floor) {
  if (eps.size() != values.size()) throw DomainError("fit: eps and values differ in length");
  if (eps.size() < 2) throw DomainError("fit: need at least two points");
  const std::size_t n = eps.size();
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(eps[i] > 0.0)) throw DomainError("fit: eps must be positive");
    if (!std::isfinite(values[i])) throw DomainError("fit: non-finite value");
    xs[i] = -std::log(eps[i]);
    ys[i] = std::log(std::max(std::abs(values[i]), floor));
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit: eps values must not all coincide");
  PowerLawFit f;
  f.points = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  // Relative test so that constant nets with rounding noise still count as exact.
  if (syy <= 1e-24 * std::max(1.0, my * my) * static_cast<double>(n)) {
    f.r_squared = 1.0;
  } else {
    f.r_squared = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  }
  return f;
}

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::moderate:
      return "moderate";
    case VerdictKind::negligible:
      return "negligible";
    case VerdictKind::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

std::string FitResult::describe() const {
  char buf[64];
  if (verdict == VerdictKind::indeterminate) return "indeterminate";
  std::snprintf(buf, sizeof buf, "%s(%g)", to_string(verdict).c_str(), exponent);
  return buf;
}

FitResult classify(const PowerLawFit& fit, const VerdictThresholds& th) {
  FitResult r;
  r.slope = fit.slope;
  r.intercept = fit.intercept;
  r.r_squared = fit.r_squared;
  const bool good = fit.r_squared >= th.r2_min;
  if (good && -fit.slope >= th.min_negligible_decay) {
    r.verdict = VerdictKind::negligible;
    r.exponent = -fit.slope;
  } else if (good || fit.slope <= th.bounded_slope) {
    r.verdict = VerdictKind::moderate;
    // Round up, ignoring rounding noise on an exactly constant net.
    r.exponent = std::ceil(std::max(fit.slope, 0.0) - 1e-9) + 0.0;
  }
  return r;
}

}  // namespace vwslab
