#include "vwslab/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "vwslab/errors.hpp"

namespace vwslab {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

// Optional cached table for the flat kernel, shared by every flat pair in a run.
struct KernelCache {
  std::shared_ptr<const KernelTable> table;

  MollifierPair apply(MollifierPair p) const {
    if (table && p.psi.kind() == MollifierKernel::Kind::flat) p.psi = p.psi.with_table(table);
    return p;
  }
};

KernelCache read_kernel_cache(ObjectReader& root) {
  KernelCache cache;
  if (!root.has("flat_kernel_table")) return cache;
  ObjectReader r(root.at("flat_kernel_table"), root.child("flat_kernel_table"));
  const std::filesystem::path path = r.string("path");
  const double spacing = r.number("spacing", 0.125);
  const double reach = r.number("reach", 64.0);
  const int max_order = r.integer("max_order", 2);
  r.finish();
  if (std::filesystem::exists(path)) {
    cache.table = std::make_shared<const KernelTable>(KernelTable::load(path));
  } else {
    auto t = MollifierKernel::flat().build_table(spacing, reach, max_order);
    t.save(path);
    cache.table = std::make_shared<const KernelTable>(std::move(t));
  }
  return cache;
}

MollifierPair pair_from(ObjectReader& r, const std::string& key, const std::string& fallback, const KernelCache& kc) {
  try {
    return kc.apply(MollifierPair::from_name(r.string(key, fallback)));
  } catch (const ConfigError& e) {
    throw ConfigError(r.child(key) + ": " + e.what());
  }
}

ProblemTemplate template_from(ObjectReader& r) { return template_from_json(r.at("template"), r.child("template")); }

NetOptions net_from(ObjectReader& r, int jobs, const KernelCache& kc) {
  NetOptions o = r.has("net") ? net_options_from_json(r.at("net"), r.child("net")) : NetOptions{};
  o.pair = kc.apply(o.pair);
  o.jobs = jobs;
  resolve_eps_grid(o);
  return o;
}

VerdictThresholds thresholds_from(ObjectReader& r) {
  return r.has("thresholds") ? thresholds_from_json(r.at("thresholds"), r.child("thresholds")) : VerdictThresholds{};
}

Json base_config(const ProblemTemplate& t, const NetOptions& o, const VerdictThresholds& th) {
  return Json{{"template", to_json(t)}, {"net", to_json(o)}, {"thresholds", to_json(th)}};
}

CsvTable norm_table(const EpsilonNet& net) {
  CsvTable t{"norms", {"eps", "omega", "t", "m", "M", "norm", "decay_warning"}, {}};
  for (const auto& m : net.members)
    for (const auto& row : m.report.norms)
      t.rows.push_back({num(m.eps), num(m.omega), num(row.t), num(row.m), num(row.M), num(row.value),
                        row.decay_warning ? "1" : "0"});
  return t;
}

CsvTable fit_table(const std::vector<LadderFit>& fits) {
  CsvTable t{"fits", {"m", "M", "slope", "intercept", "r_squared", "verdict", "exponent"}, {}};
  for (const auto& f : fits)
    t.rows.push_back({num(f.m), num(f.M), num(f.fit.slope), num(f.fit.intercept), num(f.fit.r_squared),
                      to_string(f.fit.verdict), num(f.fit.exponent)});
  return t;
}

Json ladder_fits_json(const std::vector<LadderFit>& fits) {
  Json out = Json::array();
  for (const auto& f : fits) out.push_back(Json{{"m", f.m}, {"M", f.M}, {"fit", to_json(f.fit)}, {"values", f.values}});
  return out;
}

// ------------------------------------------------------------------ commands

const std::vector<double> kDyadicGrid{0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125};

std::vector<DistributionExpr> default_pairing_inputs() {
  return {DistributionExpr::delta(0.0), DistributionExpr::delta(0.3, 1), DistributionExpr::heaviside(0.0),
          DistributionExpr::polynomial({1.0, 0.5, -0.25}), DistributionExpr::smooth(SmoothKind::sech, 0.0, 1.0)};
}

// |<u_eps, h> - <u, h>| over the eps grid for every input against the test family.
CommandResult cmd_pairing(ObjectReader& r, const KernelCache& kc) {
  CommandResult out;
  const std::vector<double> eps = r.numbers("eps_grid", kDyadicGrid);
  std::vector<DistributionExpr> inputs;
  if (r.has("inputs")) {
    const Json& in = r.at("inputs");
    if (!in.is_array() || in.empty()) throw ConfigError(r.child("inputs") + ": expected a non-empty array");
    for (std::size_t i = 0; i < in.size(); ++i) inputs.push_back(distribution_from_json(in[i], idx(r.child("inputs"), i)));
  } else {
    inputs = default_pairing_inputs();
  }
  const MollifierPair pair = pair_from(r, "pair", "gaussian", kc);
  const EpsilonScale scale = r.has("scale") ? scale_from_json(r.at("scale"), r.child("scale")) : EpsilonScale::identity();
  const double final_gap = r.number("final_gap", 1e-3);
  // Gaps this small (pairings that vanish by symmetry) do not break monotonicity.
  const double floor = r.number("monotone_floor", 1e-12);
  const auto family = test_function_family();

  CsvTable table{"pairing", {"input", "test_function", "eps", "gap"}, {}};
  Json rows = Json::array(), in_cfg = Json::array();
  out.passed = true;
  for (const auto& u : inputs) {
    in_cfg.push_back(to_json(u));
    for (const auto& h : family) {
      const cplx exact = vwslab::pair(u, h);
      std::vector<double> gaps;
      bool monotone = true;
      for (double e : eps) {
        const double gap = std::abs(pair_regularized(u, h, pair, scale, e) - exact);
        if (!gaps.empty() && gap > gaps.back() && gap > floor) monotone = false;
        gaps.push_back(gap);
        table.rows.push_back({u.describe(), h.label(), num(e), num(gap)});
      }
      const bool ok = monotone && gaps.back() < final_gap;
      out.passed = out.passed && ok;
      rows.push_back(Json{{"input", u.describe()},
                          {"test_function", h.label()},
                          {"gaps", gaps},
                          {"monotone", monotone},
                          {"passed", ok}});
    }
  }
  out.config = Json{{"mode", "pairing"},  {"eps_grid", eps},           {"inputs", in_cfg},
                    {"pair", pair.name},  {"scale", to_json(scale)},   {"final_gap", final_gap},
                    {"monotone_floor", floor}};
  out.result = Json{{"family_version", kTestFamilyVersion}, {"pairings", rows}};
  out.tables.push_back(std::move(table));
  return out;
}

// Slopes of regularized norms or regularization errors against log(1/eps).
CommandResult cmd_regularize(ObjectReader& r, const KernelCache& kc) {
  const std::string mode = r.string("mode", "norm");
  if (mode == "pairing") return cmd_pairing(r, kc);
  if (mode != "norm" && mode != "error") throw ConfigError(r.child("mode") + ": expected 'norm', 'error' or 'pairing'");
  CommandResult out;
  const std::vector<double> eps = r.numbers("eps_grid", kDyadicGrid);
  if (eps.size() < 2) throw ConfigError(r.child("eps_grid") + ": need at least two values");
  DistributionExpr input;
  TestFunction h;
  Grid grid(10.0, 8192);
  NormSpec norm{0.0, 0.0};
  int M = 0, beta = 0;
  if (mode == "norm") {
    input = distribution_from_json(r.at("input"), r.child("input"));
    if (r.has("grid")) grid = grid_from_json(r.at("grid"), r.child("grid"));
    if (r.has("norm")) norm = norm_from_json(r.at("norm"), r.child("norm"));
    out.config = Json{{"mode", mode}, {"input", to_json(input)}, {"grid", to_json(grid)}, {"norm", to_json(norm)}};
  } else {
    h = r.has("test_function") ? test_function_from_json(r.at("test_function"), r.child("test_function"))
                               : TestFunction::gaussian();
    M = r.integer("M", 0);
    beta = r.integer("beta", 0);
    out.config = Json{{"mode", mode}, {"test_function", to_json(h)}, {"M", M}, {"beta", beta}};
  }
  out.config["eps_grid"] = eps;

  Json cases_in = r.has("cases") ? r.at("cases") : Json::array({Json{{"pair", "gaussian"}}});
  if (!cases_in.is_array() || cases_in.empty()) throw ConfigError(r.child("cases") + ": expected a non-empty array");
  CsvTable table{"regularize", {"case", "pair", "eps", "omega", "value"}, {}};
  Json cases = Json::array(), cases_cfg = Json::array();
  out.passed = true;
  for (std::size_t i = 0; i < cases_in.size(); ++i) {
    const std::string path = idx(r.child("cases"), i);
    ObjectReader c(cases_in[i], path);
    const MollifierPair pair = pair_from(c, "pair", "gaussian", kc);
    const EpsilonScale scale = c.has("scale") ? scale_from_json(c.at("scale"), c.child("scale")) : EpsilonScale::identity();
    Json expect = c.has("expect") ? c.at("expect") : Json::object();
    double slope_target = NAN, tolerance = NAN, min_slope = NAN;
    {
      ObjectReader e(expect, c.child("expect"));
      if (e.has("slope")) {
        slope_target = e.number("slope");
        tolerance = e.number("tolerance");
      }
      if (e.has("min_slope")) min_slope = e.number("min_slope");
      e.finish();
    }
    c.finish();
    std::vector<double> values, omegas;
    for (double e : eps) {
      const double w = scale.omega(e);
      omegas.push_back(w);
      double v;
      if (mode == "norm") {
        v = weighted_sobolev_norm(sample(regularize(input, pair, scale, e), grid), norm.m, norm.M).value;
      } else {
        v = regularization_error(h, pair, e, M, beta, scale);
      }
      values.push_back(v);
      table.rows.push_back({std::to_string(i), pair.name, num(e), num(w), num(v)});
    }
    const PowerLawFit fit = fit_loglog(eps, values);
    // Error slopes are reported as decay rates (positive when the error shrinks).
    const double measured = mode == "error" ? -fit.slope : fit.slope;
    bool ok = true;
    if (!std::isnan(slope_target)) ok = ok && std::abs(measured - slope_target) <= tolerance;
    if (!std::isnan(min_slope)) ok = ok && measured >= min_slope;
    out.passed = out.passed && ok;
    cases.push_back(Json{{"pair", pair.name},
                         {"scale", scale.describe()},
                         {"omega", omegas},
                         {"values", values},
                         {"fit", to_json(fit)},
                         {"measured_slope", measured},
                         {"passed", ok}});
    cases_cfg.push_back(Json{{"pair", pair.name}, {"scale", to_json(scale)}, {"expect", expect}});
  }
  out.config["cases"] = cases_cfg;
  out.result = Json{{"cases", cases}};
  out.tables.push_back(std::move(table));
  return out;
}

// Closed-form, temporal-order and manufactured-solution checks of the solver.
CommandResult cmd_solver_validation(ObjectReader& r) {
  CommandResult out;
  const Grid grid = r.has("grid") ? grid_from_json(r.at("grid"), r.child("grid")) : Grid(40.0, 2048);
  const double T = r.number("T", 0.5);
  const double free_tol = r.number("free_tolerance", 1e-6);
  const double order = r.number("expected_order", 4.0);
  const double order_tol = r.number("order_tolerance", 0.3);
  const double mms_tol = r.number("manufactured_tolerance", 1e-7);
  const SolverValidation v = validate_solver(grid, T);
  out.config = Json{{"validate", true},
                    {"grid", to_json(grid)},
                    {"T", T},
                    {"free_tolerance", free_tol},
                    {"expected_order", order},
                    {"order_tolerance", order_tol},
                    {"manufactured_tolerance", mms_tol}};
  const bool free_ok = v.free_error < free_tol;
  const bool order_ok = std::abs(v.temporal_order - order) <= order_tol;
  const bool mms_ok = v.manufactured_error < mms_tol;
  out.passed = free_ok && order_ok && mms_ok;
  out.result = Json{{"free_error", v.free_error},
                    {"free_steps", v.free_steps},
                    {"order_dt", v.order_dt},
                    {"order_errors", v.order_errors},
                    {"temporal_order", v.temporal_order},
                    {"manufactured_error", v.manufactured_error},
                    {"checks", Json{{"free", free_ok}, {"order", order_ok}, {"manufactured", mms_ok}}}};
  CsvTable t{"temporal_order", {"dt", "error"}, {}};
  for (std::size_t i = 0; i < v.order_dt.size(); ++i) t.rows.push_back({num(v.order_dt[i]), num(v.order_errors[i])});
  out.tables.push_back(std::move(t));
  return out;
}

CommandResult cmd_solve(ObjectReader& r, const KernelCache& kc) {
  if (r.boolean("validate", false)) return cmd_solver_validation(r);
  CommandResult out;
  const ProblemTemplate tpl = template_from(r);
  const std::vector<NormSpec> norms = r.has("norms") ? norms_from_json(r.at("norms"), r.child("norms"))
                                                     : std::vector<NormSpec>{{0.0, 0.0}};
  const bool write_field = r.boolean("write_field", true);
  CauchyProblemSpec p;
  Json cfg{{"template", to_json(tpl)}};
  if (r.has("eps")) {
    NetOptions o;
    o.pair = pair_from(r, "pair", "gaussian", kc);
    if (r.has("scale")) o.scale = scale_from_json(r.at("scale"), r.child("scale"));
    o.data_uses_scale = r.boolean("data_uses_scale", false);
    o.ladder = norms;
    const double eps = r.number("eps");
    if (!o.scale.in_domain(eps)) throw ConfigError(r.child("eps") + ": outside the domain of " + o.scale.describe());
    p = regularized_problem(tpl, o, eps);
    cfg["eps"] = eps;
    cfg["pair"] = o.pair.name;
    cfg["scale"] = to_json(o.scale);
    cfg["data_uses_scale"] = o.data_uses_scale;
  } else {
    p = classical_problem(tpl, norms);
    cfg["eps"] = nullptr;
  }
  p.keep_trajectory = write_field;
  Json nj = Json::array();
  for (const auto& n : norms) nj.push_back(to_json(n));
  cfg["norms"] = nj;
  cfg["write_field"] = write_field;
  const SolveReport rep = solve(p);
  out.config = cfg;
  out.result = to_json(rep);
  out.passed = !rep.aborted;
  CsvTable t{"norms", {"t", "m", "M", "norm", "decay_warning"}, {}};
  for (const auto& row : rep.norms)
    t.rows.push_back({num(row.t), num(row.m), num(row.M), num(row.value), row.decay_warning ? "1" : "0"});
  out.tables.push_back(std::move(t));
  if (write_field && !rep.trajectory.empty()) {
    const Field& u = rep.final_state();
    CsvTable f{"field", {"x", "re", "im", "abs"}, {}};
    for (std::size_t i = 0; i < u.size(); ++i)
      f.rows.push_back({num(u.grid().x(i)), num(u[i].real()), num(u[i].imag()), num(std::abs(u[i]))});
    out.tables.push_back(std::move(f));
  }
  return out;
}

CommandResult cmd_net(ObjectReader& r, int jobs, const KernelCache& kc) {
  CommandResult out;
  const ProblemTemplate tpl = template_from(r);
  const NetOptions opt = net_from(r, jobs, kc);
  const VerdictThresholds th = thresholds_from(r);
  std::vector<std::pair<NormSpec, std::optional<double>>> requests;
  if (r.has("fits")) {
    const Json& f = r.at("fits");
    if (!f.is_array()) throw ConfigError(r.child("fits") + ": expected an array");
    for (std::size_t i = 0; i < f.size(); ++i) {
      ObjectReader fr(f[i], idx(r.child("fits"), i));
      NormSpec n{fr.number("m"), fr.number("M")};
      std::optional<double> t;
      if (fr.has("t")) t = fr.number("t");
      fr.finish();
      requests.push_back({n, t});
    }
  } else {
    for (const auto& n : opt.ladder) requests.push_back({n, std::nullopt});
  }
  const EpsilonNet net = build_net(tpl, opt);
  out.config = base_config(tpl, opt, th);
  std::vector<LadderFit> fits;
  Json fit_cfg = Json::array();
  out.passed = !net.any_aborted();
  for (const auto& [n, t] : requests) {
    LadderFit lf{n.m, n.M, fit_powerlaw(net, n.m, n.M, t, th), net.norms(n.m, n.M, t)};
    out.passed = out.passed && lf.fit.is_moderate();
    fits.push_back(std::move(lf));
    fit_cfg.push_back(Json{{"m", n.m}, {"M", n.M}, {"t", t ? Json(*t) : Json(nullptr)}});
  }
  out.config["fits"] = fit_cfg;
  out.result = Json{{"net", to_json(net)}, {"fits", ladder_fits_json(fits)}};
  out.tables = {norm_table(net), fit_table(fits)};
  return out;
}

CommandResult cmd_existence(ObjectReader& r, int jobs, const KernelCache& kc) {
  CommandResult out;
  const ProblemTemplate tpl = template_from(r);
  const NetOptions opt = net_from(r, jobs, kc);
  const VerdictThresholds th = thresholds_from(r);
  const ExistenceReport rep = run_existence(tpl, opt, th);
  out.config = base_config(tpl, opt, th);
  out.passed = rep.passed();
  out.result = Json{{"existence", rep.passed()},
                    {"all_moderate", rep.all_moderate},
                    {"aborted", rep.aborted},
                    {"fits", ladder_fits_json(rep.fits)},
                    {"net", to_json(rep.net)}};
  out.tables = {norm_table(rep.net), fit_table(rep.fits)};
  return out;
}

CommandResult cmd_uniqueness(ObjectReader& r, int jobs, const KernelCache& kc) {
  CommandResult out;
  const ProblemTemplate tpl = template_from(r);
  const NetOptions opt = net_from(r, jobs, kc);
  const VerdictThresholds th = thresholds_from(r);
  const double q = r.number("q");
  PerturbationTargets targets;
  if (r.has("targets")) {
    ObjectReader t(r.at("targets"), r.child("targets"));
    targets.c0 = t.boolean("c0", targets.c0);
    targets.c1 = t.boolean("c1", targets.c1);
    targets.data = t.boolean("data", targets.data);
    if (t.has("amplitude")) targets.amplitude = complex_from_json(t.at("amplitude"), t.child("amplitude"));
    targets.center = t.number("center", targets.center);
    t.finish();
  }
  const std::vector<NormSpec> norms = r.has("norms") ? norms_from_json(r.at("norms"), r.child("norms"))
                                                     : std::vector<NormSpec>{{1.0, 1.0}, {0.0, 0.0}};
  const UniquenessReport rep = run_uniqueness(tpl, q, targets, opt, th, norms);
  out.config = base_config(tpl, opt, th);
  out.config["q"] = q;
  out.config["targets"] = Json{{"c0", targets.c0},
                               {"c1", targets.c1},
                               {"data", targets.data},
                               {"amplitude", to_json(targets.amplitude)},
                               {"center", targets.center}};
  Json nj = Json::array();
  for (const auto& n : norms) nj.push_back(to_json(n));
  out.config["norms"] = nj;
  out.passed = rep.passed();
  out.result = Json{{"verdict", rep.negligible ? "negligible" : "indeterminate"},
                    {"aborted", rep.aborted},
                    {"eps", rep.base.eps()},
                    {"fits", ladder_fits_json(rep.fits)}};
  CsvTable d{"differences", {"eps", "m", "M", "difference"}, {}};
  for (const auto& f : rep.fits)
    for (std::size_t i = 0; i < f.values.size(); ++i)
      d.rows.push_back({num(rep.base.members[i].eps), num(f.m), num(f.M), num(f.values[i])});
  out.tables = {std::move(d), fit_table(rep.fits)};
  return out;
}

CommandResult cmd_consistency(ObjectReader& r, int jobs, const KernelCache& kc) {
  CommandResult out;
  const ProblemTemplate tpl = template_from(r);
  const NetOptions opt = net_from(r, jobs, kc);
  const VerdictThresholds th = thresholds_from(r);
  std::vector<MollifierPair> pairs;
  if (r.has("pairs")) {
    const Json& p = r.at("pairs");
    if (!p.is_array() || p.empty()) throw ConfigError(r.child("pairs") + ": expected a non-empty array of names");
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!p[i].is_string()) throw ConfigError(idx(r.child("pairs"), i) + ": expected a pair name");
      try {
        pairs.push_back(kc.apply(MollifierPair::from_name(p[i].get<std::string>())));
      } catch (const ConfigError& e) {
        throw ConfigError(idx(r.child("pairs"), i) + ": " + e.what());
      }
    }
  } else {
    pairs = {kc.apply(MollifierPair::gaussian()), kc.apply(MollifierPair::flat())};
  }
  const NormSpec norm = r.has("norm") ? norm_from_json(r.at("norm"), r.child("norm")) : NormSpec{1.0, 1.0};
  const ConsistencyReport rep = run_consistency(tpl, pairs, opt, norm, th);
  out.config = base_config(tpl, opt, th);
  Json pn = Json::array();
  for (const auto& p : pairs) pn.push_back(p.name);
  out.config["pairs"] = pn;
  out.config["norm"] = to_json(norm);
  out.passed = rep.passed();
  Json curves = Json::array();
  CsvTable t{"errors", {"pair", "eps", "error"}, {}};
  for (const auto& c : rep.curves) {
    curves.push_back(Json{{"pair", c.pair},
                          {"eps", c.eps},
                          {"errors", c.errors},
                          {"monotone", c.monotone},
                          {"converged", c.converged},
                          {"fit", to_json(c.fit)}});
    for (std::size_t i = 0; i < c.errors.size(); ++i) t.rows.push_back({c.pair, num(c.eps[i]), num(c.errors[i])});
  }
  out.result = Json{{"passed", rep.passed()},
                    {"limit_independent", rep.limit_independent},
                    {"aborted", rep.aborted},
                    {"reference", to_json(rep.reference)},
                    {"curves", curves}};
  out.tables.push_back(std::move(t));
  return out;
}

CommandResult cmd_classical(ObjectReader& r, int jobs, const KernelCache& kc) {
  CommandResult out;
  const ProblemTemplate tpl = template_from(r);
  const NetOptions opt = net_from(r, jobs, kc);
  const VerdictThresholds th = thresholds_from(r);
  const double m = r.number("m", 2.0);
  const double s = r.number("s", 1.0);
  const double loss = r.number("loss", 0.0);
  const std::string expect = r.string("expect_verdict", "uniform");
  if (expect != "uniform" && expect != "non-uniform" && expect != "outside classical regime")
    throw ConfigError(r.child("expect_verdict") + ": expected 'uniform', 'non-uniform' or 'outside classical regime'");
  const ClassicalReport rep = run_classical(tpl, opt, m, s, loss, th);
  out.config = base_config(tpl, opt, th);
  out.config["m"] = m;
  out.config["s"] = s;
  out.config["loss"] = loss;
  out.config["expect_verdict"] = expect;
  out.passed = rep.verdict == expect && (!rep.aborted || expect != "uniform");
  out.result = Json{{"verdict", rep.verdict},
                    {"spread", rep.spread},
                    {"decay_condition", rep.decay_condition},
                    {"aborted", rep.aborted},
                    {"eps", rep.eps},
                    {"ratios", rep.ratios},
                    {"decay_constants", rep.decay_constants}};
  CsvTable t{"ratios", {"eps", "ratio", "decay_constant"}, {}};
  for (std::size_t i = 0; i < rep.eps.size(); ++i)
    t.rows.push_back({num(rep.eps[i]), i < rep.ratios.size() ? num(rep.ratios[i]) : "", num(rep.decay_constants[i])});
  out.tables.push_back(std::move(t));
  return out;
}

CommandResult cmd_conjugate_check(ObjectReader& r, const KernelCache& kc) {
  CommandResult out;
  const Grid grid = r.has("grid") ? grid_from_json(r.at("grid"), r.child("grid")) : Grid(20.0, 512);
  const DistributionExpr v_expr = r.has("v") ? distribution_from_json(r.at("v"), r.child("v"))
                                             : DistributionExpr::smooth(SmoothKind::gaussian, 0.0, std::sqrt(2.0));
  Field v(grid);
  try {
    v = sample(as_smooth_function(v_expr), grid);
  } catch (const DomainError& e) {
    throw ConfigError(r.child("v") + ": " + e.what());
  }
  const std::vector<double> s_values = r.numbers("s_values", {0, 1, 2, 3});
  const std::vector<double> t_nodes = r.numbers("t_nodes", {0.0, 0.25, 0.5});
  const double tol = r.number("tolerance", 1e-8);
  const Json& sets = r.at("sets");
  if (!sets.is_array() || sets.empty()) throw ConfigError(r.child("sets") + ": expected a non-empty array");

  Json sets_cfg = Json::array(), sets_out = Json::array();
  CsvTable table{"conjugation", {"set", "s", "t", "relative_error"}, {}};
  double worst = 0.0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    ObjectReader sr(sets[i], idx(r.child("sets"), i));
    const std::string label = sr.string("label", "set" + std::to_string(i));
    const auto c1 = sr.has("c1") ? curve_from_json(sr.at("c1"), sr.child("c1")) : TimeCurve<DistributionExpr>{};
    const auto c0 = sr.has("c0") ? curve_from_json(sr.at("c0"), sr.child("c0")) : TimeCurve<DistributionExpr>{};
    CoefficientSet cs;
    Json cfg{{"label", label}, {"c1", to_json(c1)}, {"c0", to_json(c0)}};
    if (sr.has("regularize")) {
      ObjectReader rr(sr.at("regularize"), sr.child("regularize"));
      const MollifierPair pair = pair_from(rr, "pair", "gaussian", kc);
      const EpsilonScale scale =
          rr.has("scale") ? scale_from_json(rr.at("scale"), rr.child("scale")) : EpsilonScale::identity();
      const double eps = rr.number("eps");
      rr.finish();
      cs.c1 = regularize_curve(c1, pair, scale, eps);
      cs.c0 = regularize_curve(c0, pair, scale, eps);
      cs.eps = eps;
      cfg["regularize"] = Json{{"pair", pair.name}, {"scale", to_json(scale)}, {"eps", eps}};
    } else {
      try {
        auto smooth = [](const DistributionExpr& u) { return as_smooth_function(u); };
        cs.c1 = c1.map(smooth);
        cs.c0 = c0.map(smooth);
      } catch (const DomainError& e) {
        throw ConfigError(sr.path() + ": " + e.what() + " (add a 'regularize' block)");
      }
    }
    sr.finish();
    Json errors = Json::array();
    for (double s : s_values) {
      if (s < 0 || s != std::floor(s)) throw ConfigError(r.child("s_values") + ": s must be a non-negative integer");
      for (double t : t_nodes) {
        const double e = conjugation_identity_error(cs, static_cast<int>(s), v, t);
        worst = std::max(worst, e);
        errors.push_back(Json{{"s", s}, {"t", t}, {"relative_error", e}});
        table.rows.push_back({label, num(s), num(t), num(e)});
      }
    }
    sets_cfg.push_back(cfg);
    sets_out.push_back(Json{{"label", label}, {"errors", errors}});
  }
  out.config = Json{{"grid", to_json(grid)}, {"v", to_json(v_expr)}, {"s_values", s_values},
                    {"t_nodes", t_nodes}, {"tolerance", tol}, {"sets", sets_cfg}};
  out.passed = worst < tol;
  out.result = Json{{"max_relative_error", worst}, {"sets", sets_out}};
  out.tables.push_back(std::move(table));
  return out;
}

CommandResult cmd_psido_probe(ObjectReader& r) {
  CommandResult out;
  ProbeGrids grids;
  if (r.has("grids")) {
    ObjectReader g(r.at("grids"), r.child("grids"));
    if (g.has("coarse")) grids.coarse = grid_from_json(g.at("coarse"), g.child("coarse"));
    if (g.has("fine")) grids.fine = grid_from_json(g.at("fine"), g.child("fine"));
    g.finish();
  }
  const Json& probes = r.at("probes");
  if (!probes.is_array() || probes.empty()) throw ConfigError(r.child("probes") + ": expected a non-empty array");
  CsvTable table{"probes", {"probe", "symbol", "coarse", "fine", "relative_change", "refinement_stable", "passed"}, {}};
  Json results = Json::array();
  out.passed = true;
  auto expect_ok = [](ObjectReader& e, double value) {
    bool ok = true;
    if (e.has("equals")) ok = ok && std::abs(value - e.number("equals")) <= e.number("tolerance", 1e-12);
    if (e.has("max")) ok = ok && value <= e.number("max");
    if (e.has("min")) ok = ok && value >= e.number("min");
    return ok;
  };
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const std::string path = idx(r.child("probes"), i);
    ObjectReader p(probes[i], path);
    const std::string kind = p.string("kind");
    const Json expect = p.has("expect") ? p.at("expect") : Json::object();
    ObjectReader e(expect, p.child("expect"));
    std::vector<ProbeResult> runs;
    bool ok = true;
    if (kind == "cv") {
      const SymbolSpec sym = symbol_from_json(p.at("symbol"), p.child("symbol"));
      runs.push_back(cv_bound_probe(sym, p.number("s", 0.0), grids));
    } else if (kind == "garding") {
      runs.push_back(garding_probe(symbol_from_json(p.at("symbol"), p.child("symbol")), grids));
    } else if (kind == "composition") {
      const SymbolSpec p1 = symbol_from_json(p.at("p1"), p.child("p1"));
      const SymbolSpec p2 = symbol_from_json(p.at("p2"), p.child("p2"));
      std::vector<int> Ns;
      const Json& nj = p.at("N");
      if (nj.is_array()) {
        for (std::size_t k = 0; k < nj.size(); ++k) Ns.push_back(integer_at(nj[k], idx(p.child("N"), k)));
      } else {
        Ns.push_back(integer_at(nj, p.child("N")));
      }
      for (int N : Ns) {
        if (N < 1) throw ConfigError(p.child("N") + ": N must be >= 1");
        runs.push_back(composition_probe(p1, p2, N, grids));
      }
      if (e.boolean("decreasing", false))
        for (std::size_t k = 1; k < runs.size(); ++k) ok = ok && runs[k].fine < runs[k - 1].fine;
    } else {
      throw ConfigError(p.child("kind") + ": unknown probe kind '" + kind + "'");
    }
    Json rj = Json::array();
    for (const auto& run : runs) {
      // The expectation must hold at both resolutions.
      const bool coarse_ok = expect_ok(e, run.coarse);
      const bool fine_ok = expect_ok(e, run.fine);
      const bool run_ok = run.refinement_stable && coarse_ok && fine_ok;
      ok = ok && run_ok;
      rj.push_back(to_json(run));
      table.rows.push_back({run.probe, run.symbol, num(run.coarse), num(run.fine), num(run.relative_change),
                            run.refinement_stable ? "1" : "0", run_ok ? "1" : "0"});
    }
    e.finish();
    p.finish();
    out.passed = out.passed && ok;
    results.push_back(Json{{"kind", kind}, {"runs", rj}, {"expect", expect}, {"passed", ok}});
  }
  out.config = Json{{"grids", Json{{"coarse", to_json(grids.coarse)}, {"fine", to_json(grids.fine)}}},
                    {"probes", probes},
                    {"refinement_tolerance", kRefinementTolerance}};
  out.result = Json{{"family_version", kTestFamilyVersion}, {"probes", results}};
  out.tables.push_back(std::move(table));
  return out;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void CsvTable::write(std::ostream& os) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      const bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
      if (!quote) {
        os << cells[i];
        continue;
      }
      os << '"';
      for (char ch : cells[i]) os << (ch == '"' ? "\"\"" : std::string(1, ch));
      os << '"';
    }
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

std::vector<std::string> command_names() {
  return {"regularize", "solve",       "net",           "existence",  "uniqueness",
          "consistency", "classical", "conjugate-check", "psido-probe"};
}

CommandResult run_command(const std::string& command, const Json& config, int jobs) {
  ObjectReader root(config, "config");
  const int version = root.integer("format_version", kReportFormatVersion);
  if (version != kReportFormatVersion)
    throw ConfigError(root.child("format_version") + ": unsupported version " + std::to_string(version));
  if (root.has("command") && root.string("command") != command)
    throw ConfigError(root.child("command") + ": config is for '" + config.at("command").get<std::string>() +
                      "', not '" + command + "'");
  const int seed = root.integer("seed", 0);
  const KernelCache kc = read_kernel_cache(root);

  CommandResult out;
  if (command == "regularize") out = cmd_regularize(root, kc);
  else if (command == "solve") out = cmd_solve(root, kc);
  else if (command == "net") out = cmd_net(root, jobs, kc);
  else if (command == "existence") out = cmd_existence(root, jobs, kc);
  else if (command == "uniqueness") out = cmd_uniqueness(root, jobs, kc);
  else if (command == "consistency") out = cmd_consistency(root, jobs, kc);
  else if (command == "classical") out = cmd_classical(root, jobs, kc);
  else if (command == "conjugate-check") out = cmd_conjugate_check(root, kc);
  else if (command == "psido-probe") out = cmd_psido_probe(root);
  else throw ConfigError("unknown command '" + command + "'");
  root.finish();

  // Every computation is deterministic; the seed is recorded for provenance only.
  Json resolved{{"format_version", kReportFormatVersion}, {"command", command}, {"seed", seed}};
  if (config.contains("flat_kernel_table")) resolved["flat_kernel_table"] = config["flat_kernel_table"];
  for (auto& [k, v] : out.config.items()) resolved[k] = v;
  out.config = std::move(resolved);
  return out;
}

int run(const CliOptions& opt, std::ostream& log, std::ostream& err) {
  const auto started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (opt.format != "json" && opt.format != "csv" && opt.format != "both")
      throw ConfigError("--format must be json, csv or both");
    if (opt.jobs < 1) throw ConfigError("--jobs must be at least 1");
    std::ifstream in(opt.config);
    if (!in) throw ConfigError("cannot read config file " + opt.config.string());
    Json config;
    try {
      config = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    const CommandResult res = run_command(opt.command, config, opt.jobs);
    const int code = res.passed ? kExitPass : kExitVerdictFail;

    std::filesystem::create_directories(opt.out);
    if (opt.format != "csv") {
      const Json report{{"format_version", kReportFormatVersion},
                        {"command", opt.command},
                        {"passed", res.passed},
                        {"exit_code", code},
                        {"config", res.config},
                        {"result", res.result}};
      std::ofstream os(opt.out / "report.json");
      os << report.dump(2) << '\n';
      if (!os) throw Error("failed to write report.json");
    }
    if (opt.format != "json") {
      for (const auto& t : res.tables) {
        std::ofstream os(opt.out / (t.name + ".csv"));
        t.write(os);
        if (!os) throw Error("failed to write " + t.name + ".csv");
      }
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const Json meta{{"command", opt.command},
                    {"config_path", opt.config.string()},
                    {"jobs", opt.jobs},
                    {"started_utc", started},
                    {"finished_utc", utc_now()},
                    {"elapsed_seconds", elapsed}};
    std::ofstream(opt.out / "metadata.json") << meta.dump(2) << '\n';
    log << opt.command << ": " << (res.passed ? "pass" : "FAIL") << " (" << opt.out.string() << ")\n";
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Very weak solutions lab: regularization, solver nets and probes"};
  app.require_subcommand(1);
  CliOptions opt;
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", opt.config, "JSON config file")->required();
    sub->add_option("--jobs", opt.jobs, "parallel net members")->check(CLI::PositiveNumber);
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--format", opt.format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }
  opt.command = app.get_subcommands().front()->get_name();
  return run(opt, std::cout, std::cerr);
}

}  // namespace vwslab
