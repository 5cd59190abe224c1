#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "vwslab/grid_field.hpp"

using namespace vwslab;

namespace {

Field gaussian(const Grid& g) {
  return Field::from_function(g, [](double x) { return cplx(std::exp(-x * x / 2.0)); });
}

}  // namespace

TEST_CASE("grid nodes and wavenumbers") {
  Grid g(10.0, 16);
  CHECK(g.spacing() == doctest::Approx(1.25));
  CHECK(g.x(0) == doctest::Approx(-10.0));
  CHECK(g.wavenumber(0) == 0);
  CHECK(g.wavenumber(1) == 1);
  CHECK(g.wavenumber(15) == -1);
  CHECK(g.wavenumber(8) == -8);
  CHECK_THROWS(Grid(10.0, 96));
  CHECK(g.xi(1) == doctest::Approx(std::numbers::pi / 10.0));
}

TEST_CASE("unitary transform preserves the L2 norm") {
  Grid g(20.0, 512);
  Field f = Field::from_function(g, [](double x) { return std::exp(-x * x) * std::polar(1.0, 3.0 * x); });
  CHECK(fourier(f).l2_norm() == doctest::Approx(f.l2_norm()).epsilon(1e-13));
  const Field back = inverse_fourier(fourier(f));
  CHECK((back - f).l2_norm() < 1e-13);
}

TEST_CASE("spectral derivative of a periodic mode") {
  Grid g(10.0, 64);
  const double k = 3.0 * std::numbers::pi / 10.0;
  Field f = Field::from_function(g, [&](double x) { return cplx(std::sin(k * x)); });
  const Field d = derivative(f, 1);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(d[i] - k * std::cos(k * g.x(i))));
  CHECK(err < 1e-12);
}

TEST_CASE("derivative error of an analytic function falls faster than any fixed power") {
  // f = sech(x), f' = -sech tanh, on a fixed period.
  std::vector<double> errs;
  for (std::size_t n : {64u, 128u, 256u}) {
    Grid g(20.0, n);
    Field f = Field::from_function(g, [](double x) { return cplx(1.0 / std::cosh(x)); });
    const Field d = derivative(f, 1);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = g.x(i);
      err = std::max(err, std::abs(d[i] + std::tanh(x) / std::cosh(x)));
    }
    errs.push_back(err);
  }
  // An algebraic rate p would give ratios 2^p; require more than 2^8 per doubling.
  CHECK(errs[0] / errs[1] > 256.0);
  CHECK(errs[2] < 1e-7);
}

TEST_CASE("weighted Sobolev norms of a gaussian") {
  Grid g(40.0, 2048);
  const Field f = gaussian(g);
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  // int e^{-x^2} = sqrt(pi); int (1 + x^2) e^{-x^2} = 3 sqrt(pi) / 2; same for (1 + xi^2) by Plancherel.
  CHECK(weighted_sobolev_norm(f, 0, 0).value == doctest::Approx(std::sqrt(sqrt_pi)).epsilon(1e-12));
  CHECK(weighted_sobolev_norm(f, 1, 0).value == doctest::Approx(std::sqrt(1.5 * sqrt_pi)).epsilon(1e-12));
  CHECK(weighted_sobolev_norm(f, 0, 1).value == doctest::Approx(std::sqrt(1.5 * sqrt_pi)).epsilon(1e-12));
  CHECK(weighted_sobolev_norm(f, 0, 0).value == doctest::Approx(f.l2_norm()).epsilon(1e-14));
}

TEST_CASE("norms are nondecreasing in m and M") {
  Grid g(40.0, 1024);
  const Field f = Field::from_function(g, [](double x) { return std::exp(-x * x / 3.0) * std::polar(1.0, x); });
  for (int m = 0; m < 3; ++m)
    for (int M = 0; M < 3; ++M) {
      CHECK(weighted_sobolev_norm(f, m + 1, M).value >= weighted_sobolev_norm(f, m, M).value);
      CHECK(weighted_sobolev_norm(f, m, M + 1).value >= weighted_sobolev_norm(f, m, M).value);
    }
}

TEST_CASE("decay warning when the field does not decay") {
  Grid g(10.0, 256);
  const Field flat = Field::from_function(g, [](double) { return cplx(1.0); });
  CHECK(weighted_sobolev_norm(flat, 0, 1).decay_warning);
  CHECK_FALSE(weighted_sobolev_norm(gaussian(g), 0, 1).decay_warning);
}

TEST_CASE("binary round trip is exact") {
  Grid g(7.5, 128);
  const Field f = Field::from_function(g, [](double x) { return cplx(std::exp(-x * x), x); });
  std::stringstream ss;
  write_binary(f, ss);
  const Field h = read_binary(ss);
  CHECK(h.grid() == g);
  CHECK(h.values() == f.values());
}

TEST_CASE("dealiased product drops the top third of the spectrum") {
  Grid g(10.0, 64);
  Field f = Field::from_function(g, [&](double x) { return std::polar(1.0, g.xi(12) * x); });
  CHECK(dealias_truncate(f).l2_norm() == doctest::Approx(f.l2_norm()));
  CHECK(product(f, f, true).l2_norm() < 1e-12);
  CHECK(product(f, f, false).l2_norm() == doctest::Approx(f.l2_norm()));
}
