#include <cmath>
#include <random>

#include "doctest.h"
#include "vwslab/powerlaw.hpp"

using namespace vwslab;

namespace {

const std::vector<double> kEps{0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};

std::vector<double> power(double c, double p) {
  std::vector<double> v;
  for (double e : kEps) v.push_back(c * std::pow(e, -p));
  return v;
}

}  // namespace

TEST_CASE("exact power laws are recovered") {
  for (double p : {-4.0, -0.5, 0.0, 1.0, 2.5}) {
    const PowerLawFit f = fit_loglog(kEps, power(3.0, p));
    CHECK(f.slope == doctest::Approx(p).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK(f.points == kEps.size());
  }
}

TEST_CASE("values below the floor are clamped") {
  std::vector<double> v = power(1.0, -2.0);
  v.back() = 0.0;
  const PowerLawFit f = fit_loglog(kEps, v);
  CHECK(std::isfinite(f.slope));
  CHECK(f.slope < -2.0);
}

TEST_CASE("verdicts") {
  SUBCASE("constant net is moderate(0)") {
    const FitResult r = classify(fit_loglog(kEps, power(2.0, 0.0)));
    CHECK(r.verdict == VerdictKind::moderate);
    CHECK(r.exponent == 0.0);
    CHECK(r.describe() == "moderate(0)");
  }
  SUBCASE("eps^q net is negligible(q)") {
    for (double q : {1.0, 2.0, 4.0}) {
      const FitResult r = classify(fit_loglog(kEps, power(1.0, -q)));
      CHECK(r.verdict == VerdictKind::negligible);
      CHECK(r.exponent == doctest::Approx(q));
      CHECK(r.is_moderate());
    }
  }
  SUBCASE("growth eps^-1.3 is moderate(2)") {
    const FitResult r = classify(fit_loglog(kEps, power(1.0, 1.3)));
    CHECK(r.verdict == VerdictKind::moderate);
    CHECK(r.exponent == 2.0);
  }
  SUBCASE("weak decay is moderate, not negligible") {
    const FitResult r = classify(fit_loglog(kEps, power(1.0, -0.2)));
    CHECK(r.verdict == VerdictKind::moderate);
    CHECK(r.exponent == 0.0);
  }
  SUBCASE("noisy growth without a power law is indeterminate") {
    const std::vector<double> v{1.0, 30.0, 2.0, 500.0, 3.0, 9000.0};
    const FitResult r = classify(fit_loglog(kEps, v));
    CHECK(r.r_squared < 0.9);
    CHECK(r.verdict == VerdictKind::indeterminate);
  }
}

TEST_CASE("fit is invariant under scaling of the values") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> jitter(0.8, 1.25);
  std::vector<double> v = power(1.0, 1.0);
  for (double& x : v) x *= jitter(rng);
  std::vector<double> w = v;
  for (double& x : w) x *= 42.0;
  const PowerLawFit a = fit_loglog(kEps, v), b = fit_loglog(kEps, w);
  CHECK(a.slope == doctest::Approx(b.slope).epsilon(1e-12));
  CHECK(a.r_squared == doctest::Approx(b.r_squared).epsilon(1e-12));
}
