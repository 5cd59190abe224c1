#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "vwslab/errors.hpp"
#include "vwslab/mollifier.hpp"
#include "vwslab/powerlaw.hpp"

using namespace vwslab;

namespace {

const std::vector<double> kEps{0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125};

double fitted_slope(const std::function<double(double)>& value) {
  std::vector<double> v;
  for (double e : kEps) v.push_back(value(e));
  return fit_loglog(kEps, v).slope;
}

}  // namespace

TEST_CASE("kernels have unit mass; the flat kernel has vanishing moments") {
  const auto g = MollifierKernel::gaussian();
  const auto f = MollifierKernel::flat();
  CHECK(g.moment(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.moment(0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(g.fourier(0.0) == doctest::Approx(1.0));
  CHECK(std::abs(g.moment(2)) > 0.1);
  for (int j = 1; j <= 6; ++j) CHECK(std::abs(f.moment(j)) < 1e-10);
  CHECK(f.fourier(0.9) == doctest::Approx(1.0));
  CHECK(f.fourier(2.5) == 0.0);
  CHECK(MollifierPair::gaussian().flatness_order == 1);
  CHECK_FALSE(MollifierPair::flat().flatness_order.has_value());
  CHECK_THROWS_AS(MollifierPair::from_name("triangle"), ConfigError);
}

TEST_CASE("cutoffs equal one at the origin") {
  CHECK(Cutoff::gaussian().value(0.0) == 1.0);
  CHECK(Cutoff::flat().value(0.0) == 1.0);
  CHECK(Cutoff::flat().value(0.9) == 1.0);
  CHECK(Cutoff::flat().value(2.5) == 0.0);
}

TEST_CASE("scales") {
  CHECK(EpsilonScale::identity().omega(0.3) == 0.3);
  CHECK(EpsilonScale::power(2.0).omega(0.1) == doctest::Approx(0.01));
  CHECK(EpsilonScale::iterated_log(1).omega(std::exp(-2.0)) == doctest::Approx(0.5));
  CHECK(EpsilonScale::iterated_log(2).omega(std::exp(-std::exp(2.0))) == doctest::Approx(0.5));
  CHECK_FALSE(EpsilonScale::iterated_log(2).in_domain(0.5));
  CHECK_THROWS_AS(EpsilonScale::iterated_log(2).omega(0.5), DomainError);
  CHECK(EpsilonScale::iterated_log(4).eps_max() == 0.0);
  const auto grid = EpsilonScale::identity().default_grid();
  REQUIRE(grid.size() == 6);
  CHECK(grid.front() == 0.5);
  CHECK(grid.back() == 0.015625);
  for (double e : EpsilonScale::iterated_log(2).default_grid()) CHECK(EpsilonScale::iterated_log(2).in_domain(e));
}

TEST_CASE("regularizing with a scale equals regularizing at omega(eps)") {
  const auto scale = EpsilonScale::power(1.5);
  const auto u = DistributionExpr::delta(0.1) + DistributionExpr::heaviside(-0.3);
  for (const auto& pair : {MollifierPair::gaussian(), MollifierPair::flat()}) {
    const double eps = 0.3;
    const SmoothFunction a = regularize(u, pair, scale, eps);
    const SmoothFunction b = regularize_at(u, pair, scale.omega(eps));
    for (double x : {-1.0, 0.0, 0.2, 2.0}) CHECK(a(x) == b(x));
  }
}

TEST_CASE("regularized delta has approximately unit mass") {
  const TestFunction one_ish({1.0}, 0.0, 1e-4, 0.0);
  const cplx mass = pair_regularized(DistributionExpr::delta(0.0), one_ish, MollifierPair::gaussian(),
                                     EpsilonScale::identity(), 0.05);
  CHECK(std::abs(mass - 1.0) < 1e-3);
}

TEST_CASE("seminorm growth of regularized catalog members stays within the order bound") {
  const auto pair = MollifierPair::gaussian();
  const auto id = EpsilonScale::identity();
  // Bound slope: n + |alpha| + N (+ M, which the cutoff does not raise for compact singular support).
  struct Case {
    DistributionExpr u;
    int N;
  };
  const std::vector<Case> cases{{DistributionExpr::delta(0.0), 0}, {DistributionExpr::delta(0.0, 1), 1},
                                {DistributionExpr::heaviside(0.0), 0}};
  for (const auto& c : cases)
    for (int alpha = 0; alpha <= 2; ++alpha)
      for (int M = 0; M <= 1; ++M) {
        const double slope = fitted_slope([&](double e) {
          return probe_seminorm(regularize(c.u, pair, id, e), M, alpha, 20.0, 2049);
        });
        CHECK(slope <= 1 + alpha + c.N + M + 0.05);
      }
}

TEST_CASE("Schwartz inputs stay bounded under regularization") {
  const auto u = DistributionExpr::smooth(SmoothKind::gaussian);
  for (const auto& pair : {MollifierPair::gaussian(), MollifierPair::flat()})
    for (int alpha = 0; alpha <= 2; ++alpha) {
      const double slope = fitted_slope([&](double e) {
        return probe_seminorm(regularize(u, pair, EpsilonScale::identity(), e), 1, alpha, 20.0, 2049);
      });
      CHECK(std::abs(slope) < 0.1);
    }
}

TEST_CASE("gaussian pair approximates a gaussian to second order") {
  const double slope = fitted_slope([](double e) {
    return regularization_error(TestFunction::gaussian(), MollifierPair::gaussian(), e, 0, 0);
  });
  CHECK(slope == doctest::Approx(-2.0).epsilon(0.15));
}

TEST_CASE("flat kernel table interpolates and round-trips") {
  const auto psi = MollifierKernel::flat();
  const KernelTable table = psi.build_table(0.125, 8.0, 1);
  const auto tabled = psi.with_table(std::make_shared<const KernelTable>(table));
  for (double x : {-3.3, -0.4, 0.0, 1.7, 5.1}) {
    CHECK(std::abs(tabled.value(x) - psi.value_direct(x)) < 1e-8);
    CHECK(std::abs(tabled.value(x, 1) - psi.value_direct(x, 1)) < 1e-8);
  }
  const auto path = std::filesystem::temp_directory_path() / "vwslab_test_table.bin";
  table.save(path);
  const KernelTable back = KernelTable::load(path);
  std::filesystem::remove(path);
  CHECK(back.values() == table.values());
  CHECK(back.spacing() == table.spacing());
  CHECK(back.max_order() == table.max_order());
}
