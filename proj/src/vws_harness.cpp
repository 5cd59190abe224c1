#include "vwslab/vws_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <span>
#include <thread>

#include "vwslab/errors.hpp"

namespace vwslab {

namespace {

const cplx kI(0.0, 1.0);

// Runs fn(0..n-1) on up to `jobs` threads; the first failure (by index) is rethrown.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto work = [&] {
    for (;;) {
      const std::size_t i = next++;
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < workers; ++j) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

TimeCurve<DistributionExpr> constant_curve(DistributionExpr u) { return TimeCurve<DistributionExpr>::constant(std::move(u)); }

Field sample_data(const DistributionExpr& g, const MollifierPair& pair, const EpsilonScale& scale, double eps,
                  const Grid& grid) {
  if (g.is_zero()) return Field(grid);
  return sample(regularize(g, pair, scale, eps), grid);
}

// Evaluates the bump amplitude * exp(-(x - c)^2) as a smooth function.
SmoothFunction bump(const PerturbationTargets& p) {
  return p.amplitude * CatalogSmooth{SmoothKind::gaussian, p.center, 1.0, 0.0}.handle();
}

bool monotone_with_floor(const std::vector<double>& e, double floor) {
  for (std::size_t k = 1; k < e.size(); ++k)
    if (!(e[k] <= e[k - 1] || e[k] < floor)) return false;
  return true;
}

}  // namespace

// ------------------------------------------------------------------ templates

ProblemTemplate builtin_template(const std::string& id) {
  ProblemTemplate t;
  t.id = id;
  t.g = DistributionExpr::smooth(SmoothKind::gaussian);
  if (id == "free") {
  } else if (id == "delta-c0") {
    t.c0 = constant_curve(DistributionExpr::delta(0.0));
  } else if (id == "delta-c1") {
    t.c1 = constant_curve(kI * DistributionExpr::delta(0.0));
  } else if (id == "heaviside-c0") {
    t.c0 = constant_curve(DistributionExpr::heaviside(0.0));
  } else if (id == "regular-c1") {
    t.c1 = constant_curve(kI * DistributionExpr::smooth(SmoothKind::gaussian));
  } else if (id == "classical-decaying") {
    t.c1 = constant_curve(kI * DistributionExpr::smooth(SmoothKind::lorentzian_odd));
    t.T = 0.25;
  } else if (id == "classical-nondecaying") {
    t.c1 = constant_curve(DistributionExpr::constant(kI));
    t.T = 0.25;
  } else if (id == "delta-data") {
    t.g = DistributionExpr::delta(0.0);
    t.grid = Grid(10.0, 4096);
  } else {
    throw ConfigError("unknown template '" + id + "'");
  }
  return t;
}

std::vector<std::string> builtin_template_ids() {
  return {"free",       "delta-c0",           "delta-c1",
          "heaviside-c0", "regular-c1",       "classical-decaying",
          "classical-nondecaying", "delta-data"};
}

std::vector<NormSpec> norm_ladder(int max_order) {
  std::vector<NormSpec> out;
  for (int m = 0; m <= max_order; ++m)
    for (int M = 0; M <= max_order; ++M) out.push_back({static_cast<double>(m), static_cast<double>(M)});
  return out;
}

// ------------------------------------------------------------------------ net

bool EpsilonNet::any_aborted() const {
  return std::any_of(members.begin(), members.end(), [](const NetMember& m) { return m.report.aborted; });
}

std::vector<double> EpsilonNet::eps() const {
  std::vector<double> out;
  for (const auto& m : members) out.push_back(m.eps);
  return out;
}

std::vector<double> EpsilonNet::norms(double m, double M, std::optional<double> t) const {
  std::vector<double> out;
  for (const auto& member : members) {
    if (t) {
      out.push_back(member.report.norm_at(*t, m, M));
      continue;
    }
    double best = -1.0;
    for (const auto& row : member.report.norms)
      if (row.m == m && row.M == M) best = std::max(best, row.value);
    if (best < 0.0) throw Error("no norm recorded for the requested (m, M)");
    out.push_back(best);
  }
  return out;
}

std::vector<double> resolve_eps_grid(const NetOptions& opt) {
  std::vector<double> grid = opt.eps_grid.empty() ? opt.scale.default_grid() : opt.eps_grid;
  for (double e : grid) opt.scale.omega(e);  // throws with the domain condition
  return grid;
}

CoefficientSet regularize_coefficients(const ProblemTemplate& tpl, const NetOptions& opt, double eps) {
  CoefficientSet c;
  c.c1 = regularize_curve(tpl.c1, opt.pair, opt.scale, eps);
  c.c0 = regularize_curve(tpl.c0, opt.pair, opt.scale, eps);
  c.eps = eps;
  c.tags = {tpl.id, opt.pair.name, opt.scale.describe()};
  return c;
}

CauchyProblemSpec regularized_problem(const ProblemTemplate& tpl, const NetOptions& opt, double eps) {
  const EpsilonScale data_scale = opt.data_uses_scale ? opt.scale : EpsilonScale::identity();
  CauchyProblemSpec p;
  p.grid = tpl.grid;
  p.coeffs = regularize_coefficients(tpl, opt, eps);
  p.f = sample_curve(regularize_curve(tpl.f, opt.pair, data_scale, eps), tpl.grid);
  p.g = sample_data(tpl.g, opt.pair, data_scale, eps, tpl.grid);
  p.T = tpl.T;
  p.dt = tpl.dt;
  if (opt.fixed_dt > 0.0) p.dt.fixed_dt = opt.fixed_dt;
  p.t_nodes = tpl.t_nodes;
  p.norms = opt.ladder;
  p.dealias = tpl.dealias;
  p.keep_trajectory = false;
  return p;
}

CauchyProblemSpec classical_problem(const ProblemTemplate& tpl, const std::vector<NormSpec>& ladder) {
  auto smooth = [](const DistributionExpr& u) { return as_smooth_function(u); };
  CauchyProblemSpec p;
  p.grid = tpl.grid;
  p.coeffs.c1 = tpl.c1.map(smooth);
  p.coeffs.c0 = tpl.c0.map(smooth);
  p.coeffs.is_regular = true;
  p.coeffs.tags = {tpl.id, "unregularized"};
  p.f = sample_curve(tpl.f.map(smooth), tpl.grid);
  p.g = tpl.g.is_zero() ? Field(tpl.grid) : sample(as_smooth_function(tpl.g), tpl.grid);
  p.T = tpl.T;
  p.dt = tpl.dt;
  p.t_nodes = tpl.t_nodes;
  p.norms = ladder;
  p.dealias = tpl.dealias;
  p.keep_trajectory = false;
  return p;
}

EpsilonNet solve_net(const std::string& id, const std::vector<double>& eps, const std::vector<double>& omega,
                     const std::vector<CauchyProblemSpec>& problems, int jobs) {
  EpsilonNet net;
  net.template_id = id;
  net.members.resize(problems.size());
  parallel_for(problems.size(), jobs, [&](std::size_t i) {
    net.members[i] = {eps[i], omega[i], solve(problems[i])};
  });
  return net;
}

namespace {

struct BuiltProblems {
  std::vector<double> eps;
  std::vector<double> omega;
  std::vector<CauchyProblemSpec> problems;
};

BuiltProblems build_problems(const ProblemTemplate& tpl, const NetOptions& opt) {
  BuiltProblems b;
  b.eps = resolve_eps_grid(opt);
  for (double e : b.eps) b.omega.push_back(opt.scale.omega(e));
  b.problems.resize(b.eps.size());
  parallel_for(b.eps.size(), opt.jobs, [&](std::size_t i) { b.problems[i] = regularized_problem(tpl, opt, b.eps[i]); });
  return b;
}

EpsilonNet label(EpsilonNet net, const NetOptions& opt) {
  net.pair = opt.pair.name;
  net.scale = opt.scale.describe();
  return net;
}

}  // namespace

EpsilonNet build_net(const ProblemTemplate& tpl, const NetOptions& opt) {
  const BuiltProblems b = build_problems(tpl, opt);
  return label(solve_net(tpl.id, b.eps, b.omega, b.problems, opt.jobs), opt);
}

FitResult fit_powerlaw(const EpsilonNet& net, double m, double M, std::optional<double> t,
                       const VerdictThresholds& th) {
  EpsilonNet done = net;
  std::erase_if(done.members, [](const NetMember& x) { return x.report.aborted; });
  if (done.members.size() < 5) throw DomainError("fit needs at least 5 completed net members");
  const auto eps = done.eps();
  const auto values = done.norms(m, M, t);
  return classify(fit_loglog(eps, values), th);
}

// ------------------------------------------------------------------ existence

ExistenceReport run_existence(const ProblemTemplate& tpl, const NetOptions& opt, const VerdictThresholds& th) {
  ExistenceReport r;
  r.net = build_net(tpl, opt);
  r.aborted = r.net.any_aborted();
  r.all_moderate = true;
  for (const auto& n : opt.ladder) {
    LadderFit lf{n.m, n.M, {}, {}};
    try {
      lf.fit = fit_powerlaw(r.net, n.m, n.M, std::nullopt, th);
    } catch (const DomainError&) {
      lf.fit.verdict = VerdictKind::indeterminate;
    }
    for (const auto& member : r.net.members) {
      double best = 0.0;
      for (const auto& row : member.report.norms)
        if (row.m == n.m && row.M == n.M) best = std::max(best, row.value);
      lf.values.push_back(best);
    }
    r.all_moderate = r.all_moderate && lf.fit.is_moderate();
    r.fits.push_back(std::move(lf));
  }
  return r;
}

// ----------------------------------------------------------------- uniqueness

UniquenessReport run_uniqueness(const ProblemTemplate& tpl, double q, const PerturbationTargets& targets,
                                const NetOptions& opt, const VerdictThresholds& th, std::vector<NormSpec> norms) {
  if (norms.empty()) throw DomainError("uniqueness needs at least one norm");
  UniquenessReport r;
  r.q = q;
  NetOptions o = opt;
  o.ladder = norms;
  BuiltProblems base = build_problems(tpl, o);
  const SmoothFunction b = bump(targets);
  std::vector<CauchyProblemSpec> perturbed = base.problems;
  for (std::size_t i = 0; i < perturbed.size(); ++i) {
    const double size = std::pow(base.eps[i], q);
    auto& p = perturbed[i];
    if (targets.c0) p.coeffs.c0.terms.push_back({TimeProfile::constant(), cplx(size) * b});
    if (targets.c1) p.coeffs.c1.terms.push_back({TimeProfile::constant(), cplx(size) * b});
    if (targets.data) p.g.axpy(size, sample(b, p.grid));
    // Both members share one step so the difference isolates the perturbation.
    if (!(p.dt.fixed_dt > 0.0)) {
      const double dt = select_dt(base.problems[i], sample_coefficients(base.problems[i].coeffs, p.grid, p.dealias));
      base.problems[i].dt.fixed_dt = dt;
      p.dt.fixed_dt = dt;
    }
  }
  r.base = label(solve_net(tpl.id, base.eps, base.omega, base.problems, opt.jobs), o);
  r.perturbed = label(solve_net(tpl.id + "+perturbation", base.eps, base.omega, perturbed, opt.jobs), o);
  r.aborted = r.base.any_aborted() || r.perturbed.any_aborted();
  r.negligible = !r.aborted;
  for (const auto& n : norms) {
    LadderFit lf{n.m, n.M, {}, {}};
    if (!r.aborted) {
      for (std::size_t i = 0; i < base.eps.size(); ++i) {
        const Field d = r.base.members[i].report.final_state() - r.perturbed.members[i].report.final_state();
        lf.values.push_back(weighted_sobolev_norm(d, n.m, n.M).value);
      }
      lf.fit = classify(fit_loglog(base.eps, lf.values), th);
    }
    const bool ok = lf.fit.verdict == VerdictKind::negligible && -lf.fit.slope >= q - th.negligible_slack;
    r.negligible = r.negligible && ok;
    r.fits.push_back(std::move(lf));
  }
  return r;
}

// ---------------------------------------------------------------- consistency

bool ConsistencyReport::passed() const {
  if (aborted || !limit_independent) return false;
  return std::all_of(curves.begin(), curves.end(), [](const ConsistencyCurve& c) { return c.monotone && c.converged; });
}

ConsistencyReport run_consistency(const ProblemTemplate& tpl, const std::vector<MollifierPair>& pairs,
                                  const NetOptions& opt, NormSpec norm, const VerdictThresholds& th) {
  if (pairs.empty()) throw DomainError("consistency needs at least one mollifier pair");
  ConsistencyReport r;
  r.norm = norm;
  r.reference = solve(classical_problem(tpl, {norm}));
  r.aborted = r.reference.aborted;
  if (r.aborted) return r;
  const Field& u = r.reference.final_state();
  for (const auto& pair : pairs) {
    NetOptions o = opt;
    o.pair = pair;
    o.ladder = {norm};
    o.fixed_dt = r.reference.dt;
    const EpsilonNet net = build_net(tpl, o);
    ConsistencyCurve c;
    c.pair = pair.name;
    c.eps = net.eps();
    if (net.any_aborted()) {
      r.aborted = true;
      r.curves.push_back(std::move(c));
      continue;
    }
    for (const auto& m : net.members)
      c.errors.push_back(weighted_sobolev_norm(m.report.final_state() - u, norm.m, norm.M).value);
    c.monotone = monotone_with_floor(c.errors, th.monotone_floor);
    c.converged = c.errors.back() < th.consistency_tol;
    c.fit = fit_loglog(c.eps, c.errors);
    r.curves.push_back(std::move(c));
  }
  r.limit_independent = true;
  for (const auto& a : r.curves)
    for (const auto& b : r.curves)
      if (a.errors.empty() || b.errors.empty() ||
          std::abs(a.errors.back() - b.errors.back()) >= 2.0 * th.consistency_tol)
        r.limit_independent = false;
  return r;
}

// ------------------------------------------------------------------ classical

ClassicalReport run_classical(const ProblemTemplate& tpl, const NetOptions& opt, double m, double s, double loss,
                              const VerdictThresholds& th) {
  ClassicalReport r;
  r.m = m;
  r.s = s;
  r.loss = loss;
  NetOptions o = opt;
  o.ladder = {{m - loss, s}, {m, s}};
  BuiltProblems b = build_problems(tpl, o);
  r.eps = b.eps;

  // Forcing norm int_0^T ||f(t)||_{H^{m,s}} dt by the trapezoidal rule.
  std::vector<double> forcing(b.eps.size(), 0.0);
  std::vector<double> decay(b.eps.size(), 0.0);
  parallel_for(b.eps.size(), opt.jobs, [&](std::size_t i) {
    const auto& p = b.problems[i];
    if (!p.f.empty()) {
      constexpr int kPanels = 32;
      double acc = 0.0;
      for (int k = 0; k <= kPanels; ++k) {
        const double t = p.T * k / kPanels;
        const double w = (k == 0 || k == kPanels) ? 0.5 : 1.0;
        acc += w * weighted_sobolev_norm(evaluate_curve(p.f, t, p.grid), m, s).value;
      }
      forcing[i] = acc * p.T / kPanels;
    }
    const TimeCurve<Field> c1 = sample_curve(p.coeffs.c1, p.grid);
    double sup = 0.0;
    for (double t : {0.0, 0.5 * p.T, p.T}) {
      const Field v = evaluate_curve(c1, t, p.grid);
      for (std::size_t j = 0; j < v.size(); ++j) {
        const double x = p.grid.x(j);
        sup = std::max(sup, std::sqrt(1.0 + x * x) * std::abs(v[j].imag()));
      }
      if (c1.is_time_independent()) break;
    }
    decay[i] = sup;
  });
  r.decay_constants = decay;

  r.net = label(solve_net(tpl.id, b.eps, b.omega, b.problems, opt.jobs), o);
  r.aborted = r.net.any_aborted();
  if (!r.aborted) {
    for (std::size_t i = 0; i < b.eps.size(); ++i) {
      const auto& rep = r.net.members[i].report;
      const double data = rep.norm_at(0.0, m, s) + forcing[i];
      r.ratios.push_back(rep.norm_at(tpl.T, m - loss, s) / data);
    }
    const auto [lo, hi] = std::minmax_element(r.ratios.begin(), r.ratios.end());
    r.spread = *lo > 0.0 ? (*hi - *lo) / *lo : 0.0;
  }

  // The decay hypothesis holds when sup <x>|Im c1_eps| stays bounded as eps -> 0,
  // judged on the three finest members (the coarse ones still feel the cutoff).
  const double dmax = *std::max_element(decay.begin(), decay.end());
  const std::size_t tail = std::min<std::size_t>(3, decay.size());
  const std::span<const double> fine_eps(b.eps.data() + b.eps.size() - tail, tail);
  const std::span<const double> fine_decay(decay.data() + decay.size() - tail, tail);
  r.decay_condition = dmax == 0.0 || tail < 2 || fit_loglog(fine_eps, fine_decay).slope <= th.bounded_slope;
  if (!r.decay_condition) {
    r.verdict = "outside classical regime";
  } else if (r.aborted) {
    r.verdict = "non-uniform";
  } else {
    r.verdict = r.spread < th.classical_spread ? "uniform" : "non-uniform";
  }
  return r;
}

}  // namespace vwslab
