#include <cmath>
#include <numbers>

#include "doctest.h"
#include "vwslab/dist_catalog.hpp"
#include "vwslab/errors.hpp"
#include "vwslab/kernels.hpp"

using namespace vwslab;

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);

std::vector<DistributionExpr> catalog_members() {
  return {DistributionExpr::delta(0.0),
          DistributionExpr::delta(0.4, 1),
          DistributionExpr::delta(-0.2, 3),
          DistributionExpr::heaviside(0.5),
          DistributionExpr::polynomial({1.0, -0.5, 0.25}),
          DistributionExpr::constant(cplx(0.0, 2.0)),
          DistributionExpr::smooth(SmoothKind::sech, 0.3, 1.5),
          DistributionExpr::smooth(SmoothKind::lorentzian, 0.0, 2.0),
          DistributionExpr::smooth(SmoothKind::sine_pack, 0.0, 1.0, 3.0)};
}

}  // namespace

TEST_CASE("pairings with closed forms") {
  const TestFunction h = TestFunction::gaussian();  // exp(-x^2)
  CHECK(std::abs(pair(DistributionExpr::delta(0.3), h) - std::exp(-0.09)) < 1e-15);
  // <delta^(2)_c, h> = h''(c) = (4c^2 - 2) exp(-c^2)
  CHECK(std::abs(pair(DistributionExpr::delta(0.3, 2), h) - (4 * 0.09 - 2) * std::exp(-0.09)) < 1e-14);
  // <delta'_c, h> = -h'(c) = 2c exp(-c^2)
  CHECK(std::abs(pair(DistributionExpr::delta(0.3, 1), h) - 0.6 * std::exp(-0.09)) < 1e-14);
  CHECK(std::abs(pair(DistributionExpr::heaviside(0.0), h) - kSqrtPi / 2.0) < 1e-12);
  CHECK(std::abs(pair(DistributionExpr::polynomial({1.0, 0.0, 1.0}), h) - 1.5 * kSqrtPi) < 1e-12);
  CHECK(std::abs(pair(DistributionExpr::smooth(SmoothKind::gaussian), h) - std::sqrt(std::numbers::pi / 2.0)) <
        1e-12);
}

TEST_CASE("test function transform matches the closed gaussian form") {
  const TestFunction h = TestFunction::gaussian();
  for (double xi : {0.0, 0.7, 2.5}) CHECK(std::abs(h.fourier(xi) - kSqrtPi * std::exp(-xi * xi / 4.0)) < 1e-14);
}

TEST_CASE("pairing is linear on catalog members") {
  const auto members = catalog_members();
  const cplx alpha(0.7, -1.3);
  for (const auto& h : test_function_family()) {
    for (std::size_t i = 0; i + 1 < members.size(); ++i) {
      const auto& u = members[i];
      const auto& v = members[i + 1];
      const cplx lhs = pair(alpha * u + v, h);
      const cplx rhs = alpha * pair(u, h) + pair(v, h);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("delta pairings are bounded by the matching seminorm") {
  for (const auto& h : test_function_family())
    for (int k = 0; k <= 2; ++k) CHECK(std::abs(pair(DistributionExpr::delta(0.1, k), h)) <= h.seminorm(k) * 1.001);
}

TEST_CASE("convolution commutes with translation") {
  const auto psi = MollifierKernel::gaussian();
  const double a = 0.75, eps = 0.2;
  const std::vector<std::pair<DistributionExpr, DistributionExpr>> cases{
      {DistributionExpr::delta(0.0), DistributionExpr::delta(a)},
      {DistributionExpr::delta(0.0, 1), DistributionExpr::delta(a, 1)},
      {DistributionExpr::heaviside(0.0), DistributionExpr::heaviside(a)}};
  for (const auto& [u, shifted_u] : cases) {
    const SmoothFunction base = convolve_mollifier(u, psi, eps);
    const SmoothFunction shifted = convolve_mollifier(shifted_u, psi, eps);
    for (double x = -2.0; x <= 2.0; x += 0.1) CHECK(std::abs(shifted(x) - base(x - a)) < 1e-10);
  }
}

TEST_CASE("order per catalog variant") {
  CHECK(DistributionExpr::delta(0.0, 3).order() == 3);
  CHECK(DistributionExpr::heaviside().order() == 0);
  CHECK(DistributionExpr::polynomial({1.0, 2.0, 3.0}).order() == 2);
  CHECK(DistributionExpr::smooth(SmoothKind::sech).order() == 0);
  CHECK((DistributionExpr::delta(0.0, 1) + DistributionExpr::polynomial({0.0, 0.0, 0.0, 1.0})).order() == 3);
  CHECK(DistributionExpr::delta(0.0, 2).is_singular());
  CHECK_FALSE(DistributionExpr::smooth(SmoothKind::gaussian).is_singular());
}

TEST_CASE("singular members are not smooth functions") {
  CHECK_THROWS_AS(as_smooth_function(DistributionExpr::delta()), DomainError);
  CHECK_THROWS_AS(as_smooth_function(DistributionExpr::heaviside()), DomainError);
  const SmoothFunction f = as_smooth_function(2.0 * DistributionExpr::smooth(SmoothKind::gaussian) +
                                              DistributionExpr::polynomial({0.0, 1.0}));
  CHECK(std::abs(f(0.5) - (2.0 * std::exp(-0.25) + 0.5)) < 1e-15);
}

TEST_CASE("sampled pairing agrees with the exact pairing") {
  Grid g(10.0, 1024);
  const TestFunction h = test_function_family()[1];
  const Field hs = h.sample(g);
  for (const auto& u : {DistributionExpr::delta(0.2), DistributionExpr::delta(0.2, 1)})
    CHECK(std::abs(pair_sampled(u, hs) - pair(u, h)) < 1e-8);
  // A Riemann sum across the jump is only accurate to O(dx^2).
  CHECK(std::abs(pair_sampled(DistributionExpr::heaviside(), hs) - pair(DistributionExpr::heaviside(), h)) < 1e-4);
}

TEST_CASE("the test family is versioned and has ten members") {
  CHECK(std::string(kTestFamilyVersion) == "tf-v1");
  CHECK(test_function_family().size() == 10);
}
