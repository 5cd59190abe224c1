#include "vwslab/serialization.hpp"

#include <cmath>
#include <limits>

#include "vwslab/errors.hpp"

namespace vwslab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

const Json& require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

// JSON has no infinities; null stands for an open end.
Json bound_to_json(double v) { return std::isinf(v) ? Json(nullptr) : Json(v); }
double bound_from_json(const Json& j, const std::string& path, double inf) {
  return j.is_null() ? inf : number_at(j, path);
}

SmoothFunction smooth_power(const DistributionExpr& a, int power, const std::string& path) {
  if (power < 1) fail(path, "power must be >= 1");
  SmoothFunction base;
  try {
    base = as_smooth_function(a);
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
  SmoothFunction out = base;
  for (int k = 1; k < power; ++k) out = out * base;
  return out;
}

}  // namespace

// --------------------------------------------------------------- ObjectReader

ObjectReader::ObjectReader(const Json& j, std::string path) : j_(require_object(j, path)), path_(std::move(path)) {}

bool ObjectReader::has(const std::string& key) const { return j_.contains(key); }

const Json& ObjectReader::at(const std::string& key) {
  if (!j_.contains(key)) fail(path_, "missing required key '" + key + "'");
  used_.insert(key);
  return j_.at(key);
}

double ObjectReader::number(const std::string& key) { return number_at(at(key), child(key)); }
double ObjectReader::number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }
int ObjectReader::integer(const std::string& key) { return integer_at(at(key), child(key)); }
int ObjectReader::integer(const std::string& key, int fallback) { return has(key) ? integer(key) : fallback; }

bool ObjectReader::boolean(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  const Json& v = at(key);
  if (!v.is_boolean()) fail(child(key), "expected a boolean");
  return v.get<bool>();
}

std::string ObjectReader::string(const std::string& key) {
  const Json& v = at(key);
  if (!v.is_string()) fail(child(key), "expected a string");
  return v.get<std::string>();
}

std::string ObjectReader::string(const std::string& key, const std::string& fallback) {
  return has(key) ? string(key) : fallback;
}

std::vector<double> ObjectReader::numbers(const std::string& key, std::vector<double> fallback) {
  if (!has(key)) return fallback;
  const Json& v = at(key);
  if (!v.is_array()) fail(child(key), "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number_at(v[i], child(key) + "[" + std::to_string(i) + "]"));
  return out;
}

void ObjectReader::finish() const {
  for (const auto& item : j_.items())
    if (!used_.count(item.key())) fail(path_, "unknown key '" + item.key() + "'");
}

double number_at(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int integer_at(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

// -------------------------------------------------------------------- scalars

cplx complex_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2) return {number_at(j[0], path + "[0]"), number_at(j[1], path + "[1]")};
  fail(path, "expected a number or [re, im]");
}

Json to_json(cplx z) {
  if (z.imag() == 0.0) return z.real();
  return Json::array({z.real(), z.imag()});
}

// -------------------------------------------------------------- distributions

DistributionExpr distribution_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string type = r.string("type");
  DistributionExpr out;
  if (type == "delta") {
    const int order = r.integer("order", 0);
    if (order < 0 || order > kDefaultMaxDistributionOrder)
      fail(r.child("order"), "delta order must lie in 0.." + std::to_string(kDefaultMaxDistributionOrder));
    out = DistributionExpr::delta(r.number("center", 0.0), order);
  } else if (type == "heaviside") {
    out = DistributionExpr::heaviside(r.number("center", 0.0));
  } else if (type == "polynomial") {
    const Json& c = r.at("coefficients");
    if (!c.is_array()) fail(r.child("coefficients"), "expected an array");
    std::vector<cplx> coeffs;
    for (std::size_t i = 0; i < c.size(); ++i)
      coeffs.push_back(complex_from_json(c[i], r.child("coefficients") + "[" + std::to_string(i) + "]"));
    out = DistributionExpr::polynomial(std::move(coeffs));
  } else if (type == "constant") {
    out = DistributionExpr::constant(complex_from_json(r.at("value"), r.child("value")));
  } else if (type == "smooth") {
    SmoothKind kind;
    try {
      kind = smooth_kind_from_string(r.string("kind"));
    } catch (const ConfigError& e) {
      fail(r.child("kind"), e.what());
    }
    const double width = r.number("width", 1.0);
    if (!(width > 0.0)) fail(r.child("width"), "width must be positive");
    out = DistributionExpr::smooth(kind, r.number("center", 0.0), width, r.number("wavenumber", 0.0));
  } else if (type == "scaled") {
    const cplx s = complex_from_json(r.at("scalar"), r.child("scalar"));
    if (s == cplx(0.0)) fail(r.child("scalar"), "scalar must be non-zero");
    out = DistributionExpr::scaled(s, distribution_from_json(r.at("inner"), r.child("inner")));
  } else if (type == "sum") {
    const Json& t = r.at("terms");
    if (!t.is_array() || t.size() < 2) fail(r.child("terms"), "expected an array of at least two terms");
    std::vector<DistributionExpr> terms;
    for (std::size_t i = 0; i < t.size(); ++i)
      terms.push_back(distribution_from_json(t[i], r.child("terms") + "[" + std::to_string(i) + "]"));
    out = DistributionExpr::sum(std::move(terms));
  } else {
    fail(r.child("type"), "unknown distribution type '" + type + "'");
  }
  r.finish();
  return out;
}

Json to_json(const DistributionExpr& u) {
  return std::visit(Overloaded{
                        [](const DiracDelta& d) {
                          return Json{{"type", "delta"}, {"center", d.center}, {"order", d.order}};
                        },
                        [](const Heaviside& h) { return Json{{"type", "heaviside"}, {"center", h.center}}; },
                        [](const Polynomial& p) {
                          Json c = Json::array();
                          for (auto z : p.coefficients) c.push_back(to_json(z));
                          return Json{{"type", "polynomial"}, {"coefficients", c}};
                        },
                        [](const CatalogSmooth& s) {
                          return Json{{"type", "smooth"},     {"kind", to_string(s.kind)},
                                      {"center", s.center},   {"width", s.width},
                                      {"wavenumber", s.wavenumber}};
                        },
                        [](const ScaledNode& s) {
                          return Json{{"type", "scaled"}, {"scalar", to_json(s.scalar)}, {"inner", to_json(*s.inner)}};
                        },
                        [](const SumNode& s) {
                          Json t = Json::array();
                          for (const auto& term : s.terms) t.push_back(to_json(term));
                          return Json{{"type", "sum"}, {"terms", t}};
                        },
                    },
                    u.node());
}

// ---------------------------------------------------------------- time curves

TimeProfile profile_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string kind = r.string("kind");
  TimeProfile p;
  const cplx amp = r.has("amplitude") ? complex_from_json(r.at("amplitude"), r.child("amplitude")) : cplx(1.0);
  if (kind == "constant") {
    p = TimeProfile::constant(amp);
  } else if (kind == "sine" || kind == "cosine" || kind == "phase") {
    const double omega = r.number("omega");
    const double phase = r.number("phase", 0.0);
    p = kind == "sine" ? TimeProfile::sine(amp, omega, phase)
        : kind == "cosine" ? TimeProfile::cosine(amp, omega, phase)
                           : TimeProfile::phase(amp, omega, phase);
  } else if (kind == "hat") {
    const double inf = std::numeric_limits<double>::infinity();
    p = TimeProfile::hat(bound_from_json(r.at("left"), r.child("left"), -inf), r.number("mid"),
                         bound_from_json(r.at("right"), r.child("right"), inf));
  } else {
    fail(r.child("kind"), "unknown time profile '" + kind + "'");
  }
  r.finish();
  return p;
}

Json to_json(const TimeProfile& p) {
  switch (p.kind) {
    case TimeProfile::Kind::constant:
      return Json{{"kind", "constant"}, {"amplitude", to_json(p.amplitude)}};
    case TimeProfile::Kind::sine:
    case TimeProfile::Kind::cosine:
    case TimeProfile::Kind::phase: {
      const char* name = p.kind == TimeProfile::Kind::sine     ? "sine"
                         : p.kind == TimeProfile::Kind::cosine ? "cosine"
                                                               : "phase";
      return Json{{"kind", name}, {"amplitude", to_json(p.amplitude)}, {"omega", p.omega}, {"phase", p.phase_shift}};
    }
    case TimeProfile::Kind::hat:
      return Json{{"kind", "hat"}, {"left", bound_to_json(p.t_left)}, {"mid", p.t_mid}, {"right", bound_to_json(p.t_right)}};
  }
  return Json();
}

TimeCurve<DistributionExpr> curve_from_json(const Json& j, const std::string& path) {
  if (j.is_object() && j.contains("terms") && !j.contains("type")) {
    ObjectReader r(j, path);
    const Json& t = r.at("terms");
    if (!t.is_array()) fail(r.child("terms"), "expected an array");
    TimeCurve<DistributionExpr> c;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string p = r.child("terms") + "[" + std::to_string(i) + "]";
      ObjectReader tr(t[i], p);
      const TimeProfile prof = tr.has("profile") ? profile_from_json(tr.at("profile"), tr.child("profile"))
                                                 : TimeProfile::constant();
      c.terms.push_back({prof, distribution_from_json(tr.at("value"), tr.child("value"))});
      tr.finish();
    }
    r.finish();
    return c;
  }
  if (j.is_object() && j.contains("keyframes")) {
    ObjectReader r(j, path);
    ObjectReader k(r.at("keyframes"), r.child("keyframes"));
    const std::vector<double> times = k.numbers("times", {});
    const Json& v = k.at("values");
    if (!v.is_array()) fail(k.child("values"), "expected an array");
    std::vector<DistributionExpr> values;
    for (std::size_t i = 0; i < v.size(); ++i)
      values.push_back(distribution_from_json(v[i], k.child("values") + "[" + std::to_string(i) + "]"));
    k.finish();
    r.finish();
    try {
      return TimeCurve<DistributionExpr>::keyframes(times, std::move(values));
    } catch (const std::invalid_argument& e) {
      fail(r.child("keyframes"), e.what());
    }
  }
  return TimeCurve<DistributionExpr>::constant(distribution_from_json(j, path));
}

Json to_json(const TimeCurve<DistributionExpr>& c) {
  Json terms = Json::array();
  for (const auto& t : c.terms) terms.push_back(Json{{"profile", to_json(t.profile)}, {"value", to_json(t.value)}});
  return Json{{"terms", terms}};
}

// ------------------------------------------------------------------- settings

Grid grid_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  const double L = r.number("L");
  const int N = r.integer("N");
  r.finish();
  try {
    return Grid(L, static_cast<std::size_t>(N));
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

Json to_json(const Grid& g) { return Json{{"L", g.half_width()}, {"N", g.size()}}; }

TestFunction test_function_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  std::vector<cplx> poly{1.0};
  if (r.has("poly")) {
    const Json& p = r.at("poly");
    if (!p.is_array() || p.empty()) fail(r.child("poly"), "expected a non-empty array");
    poly.clear();
    for (std::size_t i = 0; i < p.size(); ++i)
      poly.push_back(complex_from_json(p[i], r.child("poly") + "[" + std::to_string(i) + "]"));
  }
  const double a = r.number("a", 1.0);
  if (!(a > 0.0)) fail(r.child("a"), "a must be positive");
  TestFunction h(std::move(poly), r.number("center", 0.0), a, r.number("kappa", 0.0), r.string("label", "custom"));
  r.finish();
  return h;
}

Json to_json(const TestFunction& h) {
  Json poly = Json::array();
  for (auto z : h.poly()) poly.push_back(to_json(z));
  return Json{{"poly", poly}, {"center", h.center()}, {"a", h.a()}, {"kappa", h.kappa()}, {"label", h.label()}};
}

EpsilonScale scale_from_json(const Json& j, const std::string& path) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "identity") return EpsilonScale::identity();
    fail(path, "unknown scale '" + s + "' (use an object for power and iterated_log)");
  }
  ObjectReader r(j, path);
  const std::string kind = r.string("kind");
  EpsilonScale out = EpsilonScale::identity();
  try {
    if (kind == "identity") {
    } else if (kind == "power") {
      out = EpsilonScale::power(r.number("r"));
    } else if (kind == "iterated_log") {
      out = EpsilonScale::iterated_log(r.integer("depth"));
    } else {
      fail(r.child("kind"), "unknown scale kind '" + kind + "'");
    }
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
  r.finish();
  return out;
}

Json to_json(const EpsilonScale& s) {
  switch (s.kind()) {
    case EpsilonScale::Kind::identity:
      return Json{{"kind", "identity"}};
    case EpsilonScale::Kind::power:
      return Json{{"kind", "power"}, {"r", s.exponent()}};
    case EpsilonScale::Kind::iterated_log:
      return Json{{"kind", "iterated_log"}, {"depth", s.depth()}};
  }
  return Json();
}

DtPolicy dt_policy_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  DtPolicy d;
  d.fixed_dt = r.number("fixed_dt", d.fixed_dt);
  d.cfl = r.number("cfl", d.cfl);
  d.min_steps = r.integer("min_steps", d.min_steps);
  if (d.fixed_dt < 0.0 || !(d.cfl > 0.0) || d.min_steps < 1) fail(path, "step policy values must be positive");
  r.finish();
  return d;
}

Json to_json(const DtPolicy& d) { return Json{{"fixed_dt", d.fixed_dt}, {"cfl", d.cfl}, {"min_steps", d.min_steps}}; }

NormSpec norm_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [m, M]");
  return {number_at(j[0], path + "[0]"), number_at(j[1], path + "[1]")};
}

Json to_json(const NormSpec& n) { return Json::array({n.m, n.M}); }

std::vector<NormSpec> norms_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of [m, M]");
  std::vector<NormSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(norm_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

ProblemTemplate template_from_json(const Json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return builtin_template(j.get<std::string>());
    } catch (const ConfigError& e) {
      fail(path, e.what());
    }
  }
  ObjectReader r(j, path);
  ProblemTemplate t;
  if (r.has("base")) {
    try {
      t = builtin_template(r.string("base"));
    } catch (const ConfigError& e) {
      fail(r.child("base"), e.what());
    }
  } else {
    t.g = DistributionExpr();
  }
  t.id = r.string("id", t.id);
  if (r.has("c1")) t.c1 = curve_from_json(r.at("c1"), r.child("c1"));
  if (r.has("c0")) t.c0 = curve_from_json(r.at("c0"), r.child("c0"));
  if (r.has("f")) t.f = curve_from_json(r.at("f"), r.child("f"));
  if (r.has("g")) t.g = distribution_from_json(r.at("g"), r.child("g"));
  t.T = r.number("T", t.T);
  if (!(t.T > 0.0)) fail(r.child("T"), "T must be positive");
  if (r.has("grid")) t.grid = grid_from_json(r.at("grid"), r.child("grid"));
  t.t_nodes = r.numbers("t_nodes", t.t_nodes);
  t.dealias = r.boolean("dealias", t.dealias);
  if (r.has("dt")) t.dt = dt_policy_from_json(r.at("dt"), r.child("dt"));
  r.finish();
  return t;
}

Json to_json(const ProblemTemplate& t) {
  return Json{{"id", t.id},         {"c1", to_json(t.c1)},     {"c0", to_json(t.c0)},
              {"f", to_json(t.f)},  {"g", to_json(t.g)},       {"T", t.T},
              {"grid", to_json(t.grid)}, {"t_nodes", t.t_nodes}, {"dealias", t.dealias},
              {"dt", to_json(t.dt)}};
}

NetOptions net_options_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  NetOptions o;
  try {
    if (r.has("pair")) o.pair = MollifierPair::from_name(r.string("pair"));
  } catch (const ConfigError& e) {
    fail(r.child("pair"), e.what());
  }
  if (r.has("scale")) o.scale = scale_from_json(r.at("scale"), r.child("scale"));
  o.data_uses_scale = r.boolean("data_uses_scale", o.data_uses_scale);
  o.eps_grid = r.numbers("eps_grid", {});
  for (double e : o.eps_grid)
    if (!o.scale.in_domain(e)) fail(r.child("eps_grid"), "eps = " + std::to_string(e) + " lies outside the scale's domain");
  if (r.has("ladder") && r.has("ladder_max")) fail(path, "give either 'ladder' or 'ladder_max', not both");
  if (r.has("ladder")) o.ladder = norms_from_json(r.at("ladder"), r.child("ladder"));
  if (r.has("ladder_max")) {
    const int k = r.integer("ladder_max");
    if (k < 0) fail(r.child("ladder_max"), "must be non-negative");
    o.ladder = norm_ladder(k);
  }
  o.fixed_dt = r.number("fixed_dt", 0.0);
  r.finish();
  return o;
}

Json to_json(const NetOptions& o) {
  Json ladder = Json::array();
  for (const auto& n : o.ladder) ladder.push_back(to_json(n));
  return Json{{"pair", o.pair.name},       {"scale", to_json(o.scale)}, {"data_uses_scale", o.data_uses_scale},
              {"eps_grid", resolve_eps_grid(o)}, {"ladder", ladder},          {"fixed_dt", o.fixed_dt}};
}

VerdictThresholds thresholds_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  VerdictThresholds t;
  t.r2_min = r.number("r2_min", t.r2_min);
  t.bounded_slope = r.number("bounded_slope", t.bounded_slope);
  t.negligible_slack = r.number("negligible_slack", t.negligible_slack);
  t.min_negligible_decay = r.number("min_negligible_decay", t.min_negligible_decay);
  t.consistency_tol = r.number("consistency_tol", t.consistency_tol);
  t.classical_spread = r.number("classical_spread", t.classical_spread);
  t.monotone_floor = r.number("monotone_floor", t.monotone_floor);
  r.finish();
  return t;
}

Json to_json(const VerdictThresholds& t) {
  return Json{{"r2_min", t.r2_min},
              {"bounded_slope", t.bounded_slope},
              {"negligible_slack", t.negligible_slack},
              {"min_negligible_decay", t.min_negligible_decay},
              {"consistency_tol", t.consistency_tol},
              {"classical_spread", t.classical_spread},
              {"monotone_floor", t.monotone_floor}};
}

// -------------------------------------------------------------------- symbols

SymbolSpec symbol_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string type = r.string("type");
  SymbolSpec out;
  if (type == "japanese") {
    out = SymbolSpec::japanese(r.number("m"));
  } else if (type == "xi_power") {
    const int k = r.integer("k");
    if (k < 0) fail(r.child("k"), "must be non-negative");
    out = SymbolSpec::xi_power(k);
  } else if (type == "abs_xi") {
    out = SymbolSpec::multiplier(abs_function(), 1.0, "|xi|");
  } else if (type == "multiplication" || type == "separable") {
    const DistributionExpr a = distribution_from_json(r.at("a"), r.child("a"));
    const int power = r.integer("power", 1);
    const SmoothFunction af = smooth_power(a, power, r.child("a"));
    std::string label = a.describe() + (power > 1 ? "^" + std::to_string(power) : "");
    if (type == "multiplication") {
      out = SymbolSpec::multiplication(af, label);
    } else {
      const SymbolSpec mu = symbol_from_json(r.at("mu"), r.child("mu"));
      if (!mu.x_independent() || mu.terms().size() != 1)
        fail(r.child("mu"), "the xi-factor must be a single multiplier symbol");
      out = SymbolSpec::separable(af, mu.terms()[0].mu, mu.order(), label + " * " + mu.label());
    }
  } else if (type == "sum") {
    const Json& t = r.at("terms");
    if (!t.is_array() || t.empty()) fail(r.child("terms"), "expected a non-empty array");
    for (std::size_t i = 0; i < t.size(); ++i) {
      SymbolSpec s = symbol_from_json(t[i], r.child("terms") + "[" + std::to_string(i) + "]");
      out = out.is_zero() ? s : out + s;
    }
  } else {
    fail(r.child("type"), "unknown symbol type '" + type + "'");
  }
  r.finish();
  return out;
}

// -------------------------------------------------------------------- results

Json to_json(const PowerLawFit& f) {
  return Json{{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared}, {"points", f.points}};
}

Json to_json(const FitResult& f) {
  return Json{{"slope", f.slope},
              {"intercept", f.intercept},
              {"r_squared", f.r_squared},
              {"verdict", to_string(f.verdict)},
              {"exponent", f.exponent},
              {"summary", f.describe()}};
}

Json to_json(const ProbeResult& p) {
  return Json{{"probe", p.probe},
              {"symbol", p.symbol},
              {"coarse", p.coarse},
              {"fine", p.fine},
              {"relative_change", p.relative_change},
              {"refinement_stable", p.refinement_stable},
              {"family_version", p.family_version}};
}

Json to_json(const SolveReport& r) {
  Json rows = Json::array();
  for (const auto& n : r.norms)
    rows.push_back(Json{{"t", n.t}, {"m", n.m}, {"M", n.M}, {"value", n.value}, {"decay_warning", n.decay_warning}});
  Json out{{"steps", r.steps}, {"dt", r.dt}, {"aborted", r.aborted}, {"last_valid_t", r.last_valid_t},
           {"t_nodes", r.t_nodes}, {"norms", rows}};
  if (r.aborted) out["abort_reason"] = r.abort_reason;
  if (r.manufactured_error) out["manufactured_error"] = *r.manufactured_error;
  return out;
}

Json to_json(const EpsilonNet& net) {
  Json members = Json::array();
  for (const auto& m : net.members)
    members.push_back(Json{{"eps", m.eps}, {"omega", m.omega}, {"report", to_json(m.report)}});
  return Json{{"template", net.template_id}, {"pair", net.pair}, {"scale", net.scale}, {"members", members}};
}

}  // namespace vwslab
