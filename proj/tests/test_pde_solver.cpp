#include <cmath>

#include "doctest.h"
#include "vwslab/dist_catalog.hpp"
#include "vwslab/pde_solver.hpp"

using namespace vwslab;

namespace {

SmoothFunction catalog(SmoothKind k, double width = 1.0) { return CatalogSmooth{k, 0.0, width, 0.0}.handle(); }

CauchyProblemSpec variable_problem(const Grid& grid) {
  CauchyProblemSpec p;
  p.grid = grid;
  p.T = 0.25;
  p.coeffs.c1 = TimeCurve<SmoothFunction>::constant(cplx(0.0, 0.5) * catalog(SmoothKind::sech));
  p.coeffs.c0 = TimeCurve<SmoothFunction>::modulated(TimeProfile::cosine(1.0, 3.0), catalog(SmoothKind::gaussian, 2.0));
  p.g = Field::from_function(grid, [](double x) { return std::exp(-x * x) * std::polar(1.0, x); });
  return p;
}

}  // namespace

TEST_CASE("closed form, temporal order and manufactured solution") {
  const SolverValidation v = validate_solver();
  CHECK(v.free_error < 1e-6);
  CHECK(v.temporal_order == doctest::Approx(4.0).epsilon(0.3 / 4.0));
  CHECK(v.manufactured_error < 1e-7);
}

TEST_CASE("real potential conserves the L2 norm") {
  CauchyProblemSpec p;
  p.grid = Grid(30.0, 512);
  p.T = 0.5;
  p.coeffs.c0 = TimeCurve<SmoothFunction>::constant(3.0 * catalog(SmoothKind::sech));
  p.g = Field::from_function(p.grid, [](double x) { return cplx(std::exp(-x * x)); });
  CHECK(conservation_probe(p) < 1e-9);
}

TEST_CASE("solution is linear in data and source") {
  const Grid grid(30.0, 512);
  CauchyProblemSpec a = variable_problem(grid);
  a.f = TimeCurve<Field>::constant(Field::from_function(grid, [](double x) { return cplx(std::exp(-2.0 * x * x)); }));
  CauchyProblemSpec b = variable_problem(grid);
  b.g = Field::from_function(grid, [](double x) { return cplx(x * std::exp(-x * x)); });
  CauchyProblemSpec sum = a;
  sum.g = a.g + 2.0 * b.g;
  a.dt.fixed_dt = b.dt.fixed_dt = sum.dt.fixed_dt = 0.25 / 128;
  const Field ua = solve(a).final_state();
  const Field ub = solve(b).final_state();
  const Field us = solve(sum).final_state();
  CHECK((us - ua - 2.0 * ub).l2_norm() < 1e-10);
}

TEST_CASE("halving the step changes the answer at the fourth-order level") {
  CauchyProblemSpec p = variable_problem(Grid(30.0, 512));
  p.dt.fixed_dt = 0.25 / 64;
  const Field coarse = solve(p).final_state();
  p.dt.fixed_dt /= 2;
  const Field fine = solve(p).final_state();
  CHECK((coarse - fine).l2_norm() < 1e-6);
}

TEST_CASE("step selection rule") {
  CauchyProblemSpec p;
  p.grid = Grid(12.8, 256);  // dx = 0.1
  p.T = 1.0;
  p.g = Field(p.grid);
  p.coeffs.c1 = TimeCurve<SmoothFunction>::constant(constant_function(4.0));
  CHECK(select_dt(p, sample_coefficients(p.coeffs, p.grid, false)) == doctest::Approx(0.5 * 0.1 / 4.0));
  p.coeffs.c0 = TimeCurve<SmoothFunction>::constant(constant_function(100.0));
  CHECK(select_dt(p, sample_coefficients(p.coeffs, p.grid, false)) == doctest::Approx(0.01));
  p.coeffs = {};
  CHECK(select_dt(p, sample_coefficients(p.coeffs, p.grid, false)) == doctest::Approx(1.0 / 64));
}

TEST_CASE("repeated solves are bitwise identical") {
  const CauchyProblemSpec p = variable_problem(Grid(30.0, 256));
  const SolveReport a = solve(p);
  const SolveReport b = solve(p);
  CHECK(a.final_state().values() == b.final_state().values());
  CHECK(a.steps == b.steps);
}

TEST_CASE("norms are recorded at every node") {
  CauchyProblemSpec p = variable_problem(Grid(30.0, 256));
  p.t_nodes = {0.1, 0.2};
  p.norms = {{0, 0}, {1, 1}};
  const SolveReport r = solve(p);
  CHECK(r.t_nodes == std::vector<double>{0.0, 0.1, 0.2, 0.25});
  CHECK(r.norms.size() == 8);
  CHECK(r.norm_at(0.0, 0, 0) == doctest::Approx(p.g.l2_norm()));
}

TEST_CASE("an unstable step aborts with the last valid time") {
  CauchyProblemSpec p;
  p.grid = Grid(10.0, 128);
  p.T = 50.0;
  p.dt.fixed_dt = 0.1;
  p.coeffs.c0 = TimeCurve<SmoothFunction>::constant(constant_function(1000.0));
  p.g = Field::from_function(p.grid, [](double x) { return cplx(std::exp(-x * x)); });
  const SolveReport r = solve(p);
  CHECK(r.aborted);
  CHECK(r.last_valid_t < p.T);
  CHECK_FALSE(r.abort_reason.empty());
}
