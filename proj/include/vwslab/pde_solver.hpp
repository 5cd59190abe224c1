#pragma once

// Integrating-factor RK4 for
//   u_t = i u_xx - c1(t,x) u_x - i c0(t,x) u + i f(t,x),  u(0) = g,
// i.e. S u = f with S = D_t + D^2 + c1 D + c0 and D = -i d/dx.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vwslab/grid_field.hpp"
#include "vwslab/smooth_function.hpp"
#include "vwslab/time_curve.hpp"

namespace vwslab {

struct CoefficientSet {
  TimeCurve<SmoothFunction> c1;
  TimeCurve<SmoothFunction> c0;
  /// Built from Schwartz catalog members without mollification.
  bool is_regular = false;
  /// Regularization parameter the set was built with, if any.
  std::optional<double> eps;
  std::vector<std::string> tags;

  bool is_zero() const { return c1.empty() && c0.empty(); }
};

/// Samples every spatial term of a curve on the grid.
TimeCurve<Field> sample_curve(const TimeCurve<SmoothFunction>& c, const Grid& grid);
/// sum_k a_k(t) F_k (the zero field for an empty curve).
Field evaluate_curve(const TimeCurve<Field>& c, double t, const Grid& grid);
/// sup over t in [0, T] (sampled at `samples` times) and nodes of |c(t, x)|.
double curve_max_abs(const TimeCurve<Field>& c, double T, const Grid& grid, int samples = 17);

struct DtPolicy {
  /// Use this step when positive; otherwise apply the stability rule
  /// dt = min(cfl * dx / max|c1|, 1 / max|c0|, T / min_steps).
  double fixed_dt = 0.0;
  double cfl = 0.5;
  int min_steps = 64;
};

struct NormSpec {
  double m = 0.0;
  double M = 0.0;
};

struct CauchyProblemSpec {
  Grid grid{40.0, 2048};
  CoefficientSet coeffs;
  /// Source term as a curve of grid fields.
  TimeCurve<Field> f;
  Field g{Grid(40.0, 2048)};
  double T = 0.5;
  DtPolicy dt;
  /// Output times in (0, T]; T is always included, 0 always recorded.
  std::vector<double> t_nodes;
  std::vector<NormSpec> norms{{0.0, 0.0}};
  /// 2/3-rule truncation inside the variable-coefficient products.
  bool dealias = true;
  bool keep_trajectory = true;
  /// Known solution u(t, x); when set, the report carries max |u_T - exact(T)|.
  std::function<cplx(double, double)> exact;
};

struct NormRow {
  double t;
  double m;
  double M;
  double value;
  bool decay_warning;
};

struct SolveReport {
  std::vector<double> t_nodes;
  std::vector<Field> trajectory;
  std::vector<NormRow> norms;
  long steps = 0;
  double dt = 0.0;
  bool aborted = false;
  double last_valid_t = 0.0;
  std::string abort_reason;
  std::optional<double> manufactured_error;

  /// Norm recorded at the node closest to t; throws when absent.
  double norm_at(double t, double m, double M) const;
  const Field& final_state() const { return trajectory.back(); }
};

/// Coefficients sampled on the grid (and truncated when dealiasing).
struct SampledCoefficients {
  TimeCurve<Field> c1;
  TimeCurve<Field> c0;
};
SampledCoefficients sample_coefficients(const CoefficientSet& c, const Grid& grid, bool dealias);

/// i u_xx - c1 u_x - i c0 u + i f at time t.
Field rhs(const Field& u, double t, const SampledCoefficients& coeffs, const TimeCurve<Field>& f, bool dealias);
Field rhs(const Field& u, double t, const CoefficientSet& coeffs, const TimeCurve<Field>& f, bool dealias = true);

/// Step size selected by the policy for this problem.
double select_dt(const CauchyProblemSpec& p, const SampledCoefficients& c);

SolveReport solve(const CauchyProblemSpec& problem);

struct SolverValidation {
  /// Free flow of exp(-x^2/2) against its closed form at T.
  double free_error = 0.0;
  long free_steps = 0;
  /// Fixed steps and final errors with the stiff constant c0 = 20.
  std::vector<double> order_dt;
  std::vector<double> order_errors;
  double temporal_order = 0.0;
  /// u = e^{it} exp(-x^2) with c1 = sech/2, c0 = gaussian, on [0, T/2].
  double manufactured_error = 0.0;
};

SolverValidation validate_solver(const Grid& grid = Grid(40.0, 2048), double T = 0.5);

/// max_t | ||u(t)||_{L^2} - ||g||_{L^2} | over `samples` equally spaced nodes.
double conservation_probe(const CauchyProblemSpec& problem, int samples = 32);

}  // namespace vwslab
