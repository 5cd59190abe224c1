#include <cmath>
#include <numbers>

#include "doctest.h"
#include "vwslab/errors.hpp"
#include "vwslab/vws_harness.hpp"

using namespace vwslab;

namespace {

ProblemTemplate small(const std::string& id) {
  ProblemTemplate t = builtin_template(id);
  t.grid = Grid(30.0, 512);
  return t;
}

}  // namespace

TEST_CASE("builtin templates") {
  for (const auto& id : builtin_template_ids()) CHECK(builtin_template(id).id == id);
  CHECK_THROWS_AS(builtin_template("nope"), ConfigError);
  CHECK(norm_ladder(3).size() == 16);
}

TEST_CASE("default eps grid follows the scale") {
  NetOptions o;
  CHECK(resolve_eps_grid(o) == EpsilonScale::identity().default_grid());
  o.scale = EpsilonScale::iterated_log(2);
  for (double e : resolve_eps_grid(o)) CHECK(o.scale.in_domain(e));
}

TEST_CASE("free flow perturbation difference is eps^q times the bump norm") {
  // The free flow is unitary, so ||u_eps(T) - u'_eps(T)||_{L^2} = eps^q ||exp(-x^2)||_{L^2}.
  const double bump_norm = std::pow(std::numbers::pi / 2.0, 0.25);
  for (double q : {2.0, 4.0}) {
    const UniquenessReport r = run_uniqueness(small("free"), q, PerturbationTargets{}, NetOptions{}, {}, {{0.0, 0.0}});
    REQUIRE(r.fits.size() == 1);
    const auto eps = r.base.eps();
    for (std::size_t i = 0; i < eps.size(); ++i)
      CHECK(r.fits[0].values[i] == doctest::Approx(std::pow(eps[i], q) * bump_norm).epsilon(1e-9));
    CHECK(r.passed());
    CHECK(r.fits[0].fit.exponent == doctest::Approx(q).epsilon(1e-6));
  }
}

TEST_CASE("q = 0 perturbation is not negligible") {
  const UniquenessReport r = run_uniqueness(small("free"), 0.0, PerturbationTargets{}, NetOptions{});
  CHECK_FALSE(r.negligible);
  CHECK_FALSE(r.passed());
}

TEST_CASE("net results do not depend on the worker count") {
  NetOptions a, b;
  b.jobs = 3;
  const EpsilonNet x = build_net(small("delta-c0"), a);
  const EpsilonNet y = build_net(small("delta-c0"), b);
  REQUIRE(x.members.size() == y.members.size());
  for (std::size_t i = 0; i < x.members.size(); ++i) {
    CHECK(x.members[i].eps == y.members[i].eps);
    CHECK(x.members[i].report.final_state().values() == y.members[i].report.final_state().values());
  }
}

TEST_CASE("scaling the data scales every norm") {
  const cplx alpha(-1.5, 2.0);
  ProblemTemplate t = small("delta-c0");
  ProblemTemplate s = t;
  s.g = alpha * t.g;
  NetOptions o;
  o.ladder = {{0, 0}, {1, 1}, {2, 0}};
  const EpsilonNet a = build_net(t, o);
  const EpsilonNet b = build_net(s, o);
  for (const auto& n : o.ladder) {
    const auto va = a.norms(n.m, n.M), vb = b.norms(n.m, n.M);
    for (std::size_t i = 0; i < va.size(); ++i) CHECK(vb[i] == doctest::Approx(std::abs(alpha) * va[i]).epsilon(1e-12));
    CHECK(fit_powerlaw(a, n.m, n.M).slope == doctest::Approx(fit_powerlaw(b, n.m, n.M).slope).epsilon(1e-10));
  }
}

TEST_CASE("existence on a delta potential") {
  NetOptions o;
  o.scale = EpsilonScale::iterated_log(2);
  o.ladder = norm_ladder(1);
  const ExistenceReport r = run_existence(small("delta-c0"), o);
  CHECK_FALSE(r.aborted);
  CHECK(r.fits.size() == 4);
  CHECK(r.passed());
}

TEST_CASE("consistency with the classical solve on a regular template") {
  const ConsistencyReport r =
      run_consistency(small("regular-c1"), {MollifierPair::gaussian(), MollifierPair::flat()}, NetOptions{});
  REQUIRE(r.curves.size() == 2);
  for (const auto& c : r.curves) {
    CHECK(c.monotone);
    CHECK(c.errors.back() < 1e-3);
  }
  CHECK(r.limit_independent);
  CHECK(r.passed());
}

TEST_CASE("classical regime detection") {
  ProblemTemplate nd = builtin_template("classical-nondecaying");
  nd.grid = Grid(30.0, 512);
  const ClassicalReport r = run_classical(nd, NetOptions{});
  CHECK(r.verdict == "outside classical regime");
  CHECK_FALSE(r.decay_condition);
}

TEST_CASE("free template gives unit ratios") {
  const ClassicalReport r = run_classical(small("free"), NetOptions{}, 0.0, 0.0);
  for (double ratio : r.ratios) CHECK(ratio == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.spread < 1e-8);
}
