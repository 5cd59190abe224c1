#include "vwslab/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vwslab/dist_catalog.hpp"
#include "vwslab/errors.hpp"
#include "vwslab/powerlaw.hpp"

namespace vwslab {

namespace {

const cplx kI(0.0, 1.0);

// Lower-order part N(t, u) = -c1 u_x - i c0 u + i f.
class LowerOrder {
 public:
  LowerOrder(const SampledCoefficients& c, const TimeCurve<Field>& f, bool dealias)
      : c_(c), f_(f), dealias_(dealias) {}

  Field operator()(double t, const Field& u) const {
    const Grid& grid = u.grid();
    Field out(grid);
    bool any = false;
    if (!c_.c1.empty()) {
      const Field c1 = evaluate_curve(c_.c1, t, grid);
      const Field ux = derivative(u, 1, dealias_);
      for (std::size_t i = 0; i < u.size(); ++i) out[i] -= c1[i] * ux[i];
      any = true;
    }
    if (!c_.c0.empty()) {
      const Field c0 = evaluate_curve(c_.c0, t, grid);
      const Field uu = dealias_ ? dealias_truncate(u) : u;
      for (std::size_t i = 0; i < u.size(); ++i) out[i] -= kI * c0[i] * uu[i];
      any = true;
    }
    if (any && dealias_) out = dealias_truncate(out);
    if (!f_.empty()) out.axpy(kI, evaluate_curve(f_, t, grid));
    return out;
  }

 private:
  const SampledCoefficients& c_;
  const TimeCurve<Field>& f_;
  bool dealias_;
};

}  // namespace

TimeCurve<Field> sample_curve(const TimeCurve<SmoothFunction>& c, const Grid& grid) {
  return c.map([&](const SmoothFunction& f) { return Field::from_function(grid, [&](double x) { return f(x); }); });
}

Field evaluate_curve(const TimeCurve<Field>& c, double t, const Grid& grid) {
  Field out(grid);
  for (const auto& term : c.terms) {
    const cplx a = term.profile(t);
    if (a != cplx(0.0)) out.axpy(a, term.value);
  }
  return out;
}

double curve_max_abs(const TimeCurve<Field>& c, double T, const Grid& grid, int samples) {
  if (c.empty()) return 0.0;
  double best = 0.0;
  const int n = c.is_time_independent() ? 1 : samples;
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : T * i / (n - 1);
    best = std::max(best, evaluate_curve(c, t, grid).max_abs());
  }
  return best;
}

double SolveReport::norm_at(double t, double m, double M) const {
  const NormRow* best = nullptr;
  for (const auto& row : norms) {
    if (row.m != m || row.M != M) continue;
    if (!best || std::abs(row.t - t) < std::abs(best->t - t)) best = &row;
  }
  if (!best) throw Error("no norm recorded for (m, M) = (" + std::to_string(m) + ", " + std::to_string(M) + ")");
  return best->value;
}

SampledCoefficients sample_coefficients(const CoefficientSet& c, const Grid& grid, bool dealias) {
  SampledCoefficients out{sample_curve(c.c1, grid), sample_curve(c.c0, grid)};
  if (dealias) {
    for (auto& term : out.c1.terms) term.value = dealias_truncate(term.value);
    for (auto& term : out.c0.terms) term.value = dealias_truncate(term.value);
  }
  return out;
}

Field rhs(const Field& u, double t, const SampledCoefficients& coeffs, const TimeCurve<Field>& f, bool dealias) {
  Field out = derivative(u, 2);
  out *= kI;
  out += LowerOrder(coeffs, f, dealias)(t, u);
  return out;
}

Field rhs(const Field& u, double t, const CoefficientSet& coeffs, const TimeCurve<Field>& f, bool dealias) {
  return rhs(u, t, sample_coefficients(coeffs, u.grid(), dealias), f, dealias);
}

double select_dt(const CauchyProblemSpec& p, const SampledCoefficients& c) {
  if (p.dt.fixed_dt > 0.0) return std::min(p.dt.fixed_dt, p.T);
  double dt = p.T / std::max(1, p.dt.min_steps);
  const double c1max = curve_max_abs(c.c1, p.T, p.grid);
  if (c1max > 0.0) dt = std::min(dt, p.dt.cfl * p.grid.spacing() / c1max);
  const double c0max = curve_max_abs(c.c0, p.T, p.grid);
  if (c0max > 0.0) dt = std::min(dt, 1.0 / c0max);
  return dt;
}

namespace {

// Exact flow of u_t = i u_xx over tau: multiplier exp(-i xi^2 tau).
class FreeFlow {
 public:
  FreeFlow(const Grid& grid, double tau) : factor_(grid.size()) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double xi = grid.xi(k);
      factor_[k] = std::polar(1.0, -xi * xi * tau);
    }
  }
  Field operator()(const Field& u) const {
    auto s = fourier(u);
    auto& c = s.coefficients();
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= factor_[k];
    return inverse_fourier(s);
  }

 private:
  std::vector<cplx> factor_;
};

// One Lawson RK4 step with E = exp(L h / 2):
//   u+ = E^2 u + h/6 (E^2 k1 + 2 E (k2 + k3) + k4).
Field lawson_step(const Field& u, double t, double h, const LowerOrder& N, const FreeFlow& E) {
  const Field k1 = N(t, u);
  const Field Eu = E(u);
  const Field Ek1 = E(k1);
  Field a = Eu;
  a.axpy(0.5 * h, Ek1);
  const Field k2 = N(t + 0.5 * h, a);
  Field b = Eu;
  b.axpy(0.5 * h, k2);
  const Field k3 = N(t + 0.5 * h, b);
  Field c = Eu;
  c.axpy(h, k3);
  c = E(c);
  const Field k4 = N(t + h, c);
  Field acc = Ek1;
  acc.axpy(2.0, k2);
  acc.axpy(2.0, k3);
  Field inner_ = Eu;
  inner_.axpy(h / 6.0, acc);
  Field out = E(inner_);
  out.axpy(h / 6.0, k4);
  return out;
}

}  // namespace

SolveReport solve(const CauchyProblemSpec& p) {
  if (!(p.T > 0.0)) throw DomainError("horizon T must be positive");
  if (!(p.g.grid() == p.grid)) throw DomainError("initial data lives on a different grid");
  for (const auto& term : p.f.terms)
    if (!(term.value.grid() == p.grid)) throw DomainError("source term lives on a different grid");

  const SampledCoefficients coeffs = sample_coefficients(p.coeffs, p.grid, p.dealias);
  const LowerOrder N(coeffs, p.f, p.dealias);
  const double dt_max = select_dt(p, coeffs);

  std::vector<double> nodes;
  for (double t : p.t_nodes)
    if (t > 0.0 && t < p.T) nodes.push_back(t);
  nodes.push_back(p.T);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  SolveReport report;
  report.dt = dt_max;
  const double fmax = p.f.empty() ? 0.0 : [&] {
    double best = 0.0;
    const int n = p.f.is_time_independent() ? 1 : 17;
    for (int i = 0; i < n; ++i) best = std::max(best, evaluate_curve(p.f, n == 1 ? 0.0 : p.T * i / (n - 1), p.grid).l2_norm());
    return best;
  }();
  const double reference = std::max({p.g.l2_norm(), p.T * fmax, std::numeric_limits<double>::min()});
  const double guard = 1e12 * reference;

  auto record = [&](double t, const Field& u) {
    report.t_nodes.push_back(t);
    for (const auto& ns : p.norms) {
      const auto nv = weighted_sobolev_norm(u, ns.m, ns.M);
      report.norms.push_back({t, ns.m, ns.M, nv.value, nv.decay_warning});
    }
    if (p.keep_trajectory || t == p.T) report.trajectory.push_back(u);
  };

  Field u = p.g;
  double t = 0.0;
  record(0.0, u);
  for (double node : nodes) {
    const double len = node - t;
    const long steps = std::max(1L, static_cast<long>(std::ceil(len / dt_max - 1e-9)));
    const double h = len / static_cast<double>(steps);
    const FreeFlow E(p.grid, 0.5 * h);
    const double t0 = t;
    for (long s = 0; s < steps; ++s) {
      Field next = lawson_step(u, t, h, N, E);
      const double nrm = next.l2_norm();
      if (!std::isfinite(nrm) || nrm > guard) {
        report.aborted = true;
        report.last_valid_t = t;
        report.abort_reason = std::isfinite(nrm) ? "norm exceeded overflow guard (1e12 x data norm)"
                                                 : "non-finite state";
        report.steps += s;
        return report;
      }
      u = std::move(next);
      t = t0 + h * static_cast<double>(s + 1);
    }
    report.steps += steps;
    t = node;
    record(node, u);
  }
  report.last_valid_t = p.T;
  if (p.exact) {
    double err = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(u[i] - p.exact(p.T, p.grid.x(i))));
    report.manufactured_error = err;
  }
  return report;
}

double conservation_probe(const CauchyProblemSpec& problem, int samples) {
  CauchyProblemSpec p = problem;
  p.t_nodes.clear();
  for (int i = 1; i <= samples; ++i) p.t_nodes.push_back(p.T * i / samples);
  p.norms = {{0.0, 0.0}};
  p.keep_trajectory = false;
  const auto report = solve(p);
  const double g = p.g.l2_norm();
  double worst = 0.0;
  for (const auto& row : report.norms) worst = std::max(worst, std::abs(row.value - g));
  if (report.aborted) worst = std::numeric_limits<double>::infinity();
  return worst;
}

SolverValidation validate_solver(const Grid& grid, double T) {
  SolverValidation out;
  // exp(-x^2/2) under u_t = i u_xx, times the phase of a constant c0.
  auto free_exact = [](double c0) {
    return [c0](double t, double x) {
      const cplx a = 1.0 + 2.0 * kI * t;
      return std::exp(-kI * c0 * t) / std::sqrt(a) * std::exp(-x * x / (2.0 * a));
    };
  };
  CauchyProblemSpec p;
  p.grid = grid;
  p.T = T;
  p.g = Field::from_function(grid, [](double x) { return cplx(std::exp(-x * x / 2.0)); });
  p.keep_trajectory = false;
  p.exact = free_exact(0.0);
  const SolveReport free = solve(p);
  out.free_error = free.aborted ? INFINITY : *free.manufactured_error;
  out.free_steps = free.steps;

  const double c0 = 20.0;
  CauchyProblemSpec q = p;
  q.coeffs.c0 = TimeCurve<SmoothFunction>::constant(constant_function(c0));
  q.dealias = false;
  q.exact = free_exact(c0);
  for (int k = 6; k <= 10; ++k) {
    q.dt.fixed_dt = std::ldexp(T, -k);
    const SolveReport r = solve(q);
    out.order_dt.push_back(q.dt.fixed_dt);
    out.order_errors.push_back(r.aborted ? INFINITY : *r.manufactured_error);
  }
  out.temporal_order = -fit_loglog(out.order_dt, out.order_errors).slope;

  CauchyProblemSpec m;
  m.grid = grid;
  m.T = T / 2.0;
  m.keep_trajectory = false;
  const SmoothFunction c1 = 0.5 * CatalogSmooth{SmoothKind::sech, 0.0, 1.0, 0.0}.handle();
  const SmoothFunction c0m = CatalogSmooth{SmoothKind::gaussian, 0.0, 1.0, 0.0}.handle();
  m.coeffs.c1 = TimeCurve<SmoothFunction>::constant(c1);
  m.coeffs.c0 = TimeCurve<SmoothFunction>::constant(c0m);
  auto bump = [](double x) { return std::exp(-x * x); };
  m.g = Field::from_function(grid, [&](double x) { return cplx(bump(x)); });
  // S(e^{it} g) with D = -i d/dx.
  const Field F = Field::from_function(
      grid, [&](double x) { return bump(x) * (1.0 - (4.0 * x * x - 2.0) + 2.0 * kI * x * c1(x) + c0m(x)); });
  m.f = TimeCurve<Field>::modulated(TimeProfile::phase(1.0, 1.0), F);
  m.exact = [&](double t, double x) { return bump(x) * std::polar(1.0, t); };
  const SolveReport mr = solve(m);
  out.manufactured_error = mr.aborted ? INFINITY : *mr.manufactured_error;
  return out;
}

}  // namespace vwslab
