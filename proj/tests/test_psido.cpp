#include <cmath>

#include "doctest.h"
#include "vwslab/dist_catalog.hpp"
#include "vwslab/mollifier.hpp"
#include "vwslab/psido.hpp"

using namespace vwslab;

namespace {

const Grid kGrid(20.0, 256);

Field probe_field() { return test_function_family()[3].sample(kGrid); }

SmoothFunction gaussian_fn() { return CatalogSmooth{SmoothKind::gaussian, 0.0, 1.0, 0.0}.handle(); }

double rel(const Field& a, const Field& b) { return (a - b).l2_norm() / b.l2_norm(); }

}  // namespace

TEST_CASE("multiplier symbols match the Fourier multiplier path") {
  const Field u = probe_field();
  for (double m : {-1.0, 0.5, 2.0}) {
    const Field ref = apply_multiplier(u, [m](double xi) { return cplx(std::pow(1.0 + xi * xi, m / 2.0)); }, true);
    CHECK(rel(quantize_direct(SymbolSpec::japanese(m), u), ref) < 1e-12);
    CHECK(rel(quantize(SymbolSpec::japanese(m), u), ref) < 1e-12);
  }
}

TEST_CASE("xi quantizes to -i d/dx") {
  const Field u = probe_field();
  Field d = derivative(u, 1);
  d *= cplx(0.0, -1.0);
  CHECK(rel(quantize_direct(SymbolSpec::xi_power(1), u), d) < 1e-12);
}

TEST_CASE("multiplication symbols multiply pointwise") {
  const Field u = probe_field();
  const Field a = sample(gaussian_fn(), kGrid);
  CHECK(rel(quantize_direct(SymbolSpec::multiplication(gaussian_fn(), "g"), u), product(a, u)) < 1e-12);
}

TEST_CASE("direct sum agrees with the separable path") {
  const Field u = probe_field();
  const SymbolSpec p = SymbolSpec::japanese(1.0) +
                       SymbolSpec::separable(japanese_power(-2.0), polynomial_function({0.0, 1.0}), 1.0, "x");
  CHECK(rel(quantize(p, u), quantize_direct(p, u)) < 1e-12);
}

TEST_CASE("quantization is linear in symbol and field") {
  const Field u = probe_field();
  const Field v = test_function_family()[6].sample(kGrid);
  const SymbolSpec p = SymbolSpec::japanese(1.0);
  const SymbolSpec q = SymbolSpec::separable(gaussian_fn(), polynomial_function({0.0, 1.0}), 1.0, "g xi");
  CHECK(rel(quantize_direct(p + q, u), quantize_direct(p, u) + quantize_direct(q, u)) < 1e-12);
  const cplx alpha(2.0, -0.5);
  CHECK(rel(quantize_direct(q, alpha * u + v), alpha * quantize_direct(q, u) + quantize_direct(q, v)) < 1e-12);
}

TEST_CASE("composition expansion terminates for polynomial symbols") {
  const SymbolSpec a = SymbolSpec::multiplication(gaussian_fn(), "g");
  CHECK(composition_residual(SymbolSpec::xi_power(1), a, 2, Grid(20.0, 512)) < 1e-10);
  CHECK(composition_residual(SymbolSpec::xi_power(2), a, 3, Grid(20.0, 512)) < 1e-10);
  // One term short leaves the commutator.
  CHECK(composition_residual(SymbolSpec::xi_power(1), a, 1, Grid(20.0, 512)) > 1e-2);
}

TEST_CASE("conjugated coefficients for s = 1 without coefficients") {
  const CoefficientSet c = conjugated_coefficients(CoefficientSet{}, 1);
  for (double x : {-3.0, -0.5, 0.0, 1.2, 4.0}) {
    const double w = 1.0 + x * x;
    CHECK(std::abs(evaluate_curve(c.c1, 0.0, x) - cplx(0.0, 2.0 * x / w)) < 1e-14);
    CHECK(std::abs(evaluate_curve(c.c0, 0.0, x) - (-3.0 * x * x / (w * w) + 1.0 / w)) < 1e-14);
  }
}

TEST_CASE("conjugation identity for s = 0..3") {
  const Grid g(20.0, 512);
  const Field v = Field::from_function(g, [](double x) { return cplx(std::exp(-x * x / 2.0)); });
  CoefficientSet c;
  c.c1 = TimeCurve<SmoothFunction>::constant(cplx(0.0, 1.0) * gaussian_fn());
  c.c0 = TimeCurve<SmoothFunction>::modulated(TimeProfile::sine(1.0, 2.0), CatalogSmooth{SmoothKind::sech}.handle());
  CoefficientSet d;
  d.c0 = TimeCurve<SmoothFunction>::constant(
      regularize(DistributionExpr::delta(), MollifierPair::gaussian(), EpsilonScale::identity(), 0.25));
  for (int s = 0; s <= 3; ++s)
    for (double t : {0.0, 0.3}) {
      CHECK(conjugation_identity_error(c, s, v, t) < 1e-8);
      CHECK(conjugation_identity_error(d, s, v, t) < 1e-8);
    }
}

TEST_CASE("bound and positivity probes") {
  CHECK(cv_ratio(SymbolSpec::japanese(2.0), 1.0, kGrid) == doctest::Approx(1.0).epsilon(1e-12));
  const ProbeResult g = garding_probe(SymbolSpec::japanese(1.0));
  CHECK(g.fine >= 0.0);
  CHECK(g.refinement_stable);
  CHECK(g.family_version == kTestFamilyVersion);
  CHECK(garding_ratio(SymbolSpec::multiplier(abs_function(), 1.0, "|xi|"), kGrid) >= 0.0);
}

TEST_CASE("symbol seminorms of <xi>^m") {
  const auto s = SymbolSpec::japanese(2.0).seminorms(kGrid, 2);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == doctest::Approx(1.0));
  CHECK(s[1] >= s[0]);
  CHECK(s[2] >= s[1]);
}
