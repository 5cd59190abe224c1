// Runs every bundled acceptance config and checks its result against the
// criterion's own tolerance (not the expectation stored in the config).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "vwslab/cli.hpp"

using namespace vwslab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Timed {
  Json result;
  double seconds;
};

Timed run_config(const std::string& file) {
  std::ifstream in(std::string(VWSLAB_CONFIG_DIR) + "/" + file);
  if (!in) throw std::runtime_error("missing config " + file);
  const Json cfg = Json::parse(in);
  const auto t0 = std::chrono::steady_clock::now();
  const CommandResult r = run_command(cfg.at("command").get<std::string>(), cfg, 1);
  return {r.result, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
}

Outcome regularization_scaling() {
  Outcome o;
  const Timed t = run_config("c01_regularization_scaling.json");
  const double slope = t.result["cases"][0]["fit"]["slope"];
  o.require(std::abs(slope - 0.5) <= 0.05, "slope 0.5 +- 0.05");
  o.require(t.seconds < 10.0, "runtime < 10 s");
  o.note(fmt("slope %.4f", slope));
  o.note(fmt("%.2f s", t.seconds));
  return o;
}

Outcome mollifier_order() {
  Outcome o;
  const Timed t = run_config("c02_mollifier_order.json");
  bool saw_flat = false, saw_gaussian = false;
  for (const auto& c : t.result["cases"]) {
    const double decay = c["measured_slope"];
    if (c["pair"] == "flat") {
      saw_flat = true;
      o.require(decay >= 2.0 - 0.2, "flat slope >= q - 0.2 for q = 2");
      o.require(decay >= 4.0 - 0.2, "flat slope >= q - 0.2 for q = 4");
      o.note(fmt("flat %.1f", decay));
    } else {
      saw_gaussian = true;
      o.require(std::abs(decay - 2.0) <= 0.3, "gaussian slope 2 +- 0.3");
      o.note(fmt("gaussian %.3f", decay));
    }
  }
  o.require(saw_flat && saw_gaussian, "both pairs present");
  return o;
}

Outcome sprime_convergence() {
  Outcome o;
  const Timed t = run_config("c03_sprime_convergence.json");
  const auto& rows = t.result["pairings"];
  o.require(rows.size() == 50, "5 x 10 pairings");
  double worst = 0.0;
  for (const auto& r : rows) {
    const std::vector<double> gaps = r["gaps"];
    for (std::size_t i = 1; i < gaps.size(); ++i)
      o.require(gaps[i] <= gaps[i - 1] || gaps[i] < 1e-12,
                "monotone gap for " + r["input"].get<std::string>() + " / " + r["test_function"].get<std::string>());
    worst = std::max(worst, gaps.back());
  }
  o.require(worst < 1e-3, "final gap < 1e-3");
  o.note(fmt("largest final gap %.2e", worst));
  return o;
}

Outcome solver_validation() {
  Outcome o;
  const Timed t = run_config("c04_solver_validation.json");
  const double free = t.result["free_error"], order = t.result["temporal_order"],
               mms = t.result["manufactured_error"];
  o.require(free < 1e-6, "closed-form error < 1e-6");
  o.require(std::abs(order - 4.0) <= 0.3, "temporal order 4 +- 0.3");
  o.require(mms < 1e-7, "manufactured error < 1e-7");
  o.require(t.seconds < 30.0, "runtime < 30 s");
  o.note(fmt("free %.1e", free));
  o.note(fmt("order %.3f", order));
  o.note(fmt("mms %.1e", mms));
  o.note(fmt("%.2f s", t.seconds));
  return o;
}

Outcome conjugation() {
  Outcome o;
  const Timed t = run_config("c05_conjugation.json");
  o.require(t.result["sets"].size() == 3, "3 coefficient sets");
  double worst = 0.0;
  std::vector<bool> seen(4, false);
  for (const auto& set : t.result["sets"])
    for (const auto& e : set["errors"]) {
      worst = std::max(worst, e["relative_error"].get<double>());
      const int s = static_cast<int>(e["s"].get<double>());
      if (s >= 0 && s < 4) seen[s] = true;
    }
  for (int s = 0; s < 4; ++s) o.require(seen[s], "s = " + std::to_string(s) + " tested");
  o.require(worst < 1e-8, "relative error < 1e-8");
  o.note(fmt("max error %.1e", worst));
  return o;
}

Outcome existence() {
  Outcome o;
  double seconds = 0.0;
  for (const char* id : {"delta-c0", "delta-c1", "heaviside-c0"}) {
    const Timed t = run_config(std::string("c06_existence_") + id + ".json");
    seconds += t.seconds;
    o.require(t.result["aborted"] == false, std::string("no aborted solves for ") + id);
    o.require(t.result["fits"].size() == 16, "all (m, M <= 3) fitted");
    double max_slope = -1e9;
    for (const auto& f : t.result["fits"]) {
      const double slope = f["fit"]["slope"], r2 = f["fit"]["r_squared"];
      o.require(f["fit"]["verdict"] == "moderate" || f["fit"]["verdict"] == "negligible",
                std::string("moderate verdict for ") + id);
      o.require(r2 >= 0.9 || slope <= 0.1, std::string("r^2 >= 0.9 or bounded for ") + id);
      max_slope = std::max(max_slope, slope);
    }
    o.note(std::string(id) + fmt(" max slope %.3f", max_slope));
  }
  o.require(seconds < 600.0, "runtime < 10 min");
  o.note(fmt("%.1f s", seconds));
  return o;
}

Outcome uniqueness() {
  Outcome o;
  for (int q : {2, 4}) {
    const Timed t = run_config("c07_uniqueness_q" + std::to_string(q) + ".json");
    bool h11 = false, h00 = false;
    for (const auto& f : t.result["fits"]) {
      const double m = f["m"], M = f["M"], slope = f["fit"]["slope"];
      if (m == 1 && M == 1) h11 = true;
      if (m == 0 && M == 0) h00 = true;
      o.require(-slope >= q - 0.5, "difference slope >= q - 0.5");
      o.note(fmt("q=%g", q) + fmt(" H%g", m) + fmt(",%g", M) + fmt(" %.3f", -slope));
    }
    o.require(h11 && h00, "H^{1,1} and H^{0,0} tested");
  }
  return o;
}

Outcome consistency() {
  Outcome o;
  const Timed t = run_config("c08_consistency.json");
  o.require(t.result["curves"].size() == 2, "two mollifier pairs");
  for (const auto& c : t.result["curves"]) {
    const std::vector<double> e = c["errors"];
    for (std::size_t i = 1; i < e.size(); ++i) o.require(e[i] <= e[i - 1] || e[i] < 1e-10, "monotone error");
    o.require(e.back() < 1e-3, "final error < 1e-3");
    o.note(c["pair"].get<std::string>() + fmt(" %.2e", e.back()));
  }
  o.require(t.result["limit_independent"] == true, "limit independence");
  return o;
}

Outcome classical() {
  Outcome o;
  const Timed d = run_config("c09_classical_decaying.json");
  const double spread = d.result["spread"];
  o.require(d.result["verdict"] == "uniform", "decaying template uniform");
  o.require(spread < 0.10, "ratio spread < 10%");
  const Timed n = run_config("c09_classical_nondecaying.json");
  o.require(n.result["verdict"] == "outside classical regime", "non-decaying template flagged");
  o.note(fmt("spread %.4f", spread));
  o.note("non-decaying: " + n.result["verdict"].get<std::string>());
  return o;
}

Outcome probes() {
  Outcome o;
  const Timed t = run_config("c10_psido_probes.json");
  int cv = 0, comp = 0, gard = 0;
  for (const auto& p : t.result["probes"]) {
    const std::string kind = p["kind"];
    for (const auto& r : p["runs"]) {
      const double c = r["coarse"], f = r["fine"];
      o.require(r["refinement_stable"] == true, "refinement stable within 5%");
      if (kind == "cv") {
        ++cv;
        o.require(std::abs(c - 1.0) < 1e-12 && std::abs(f - 1.0) < 1e-12, "multiplier CV ratio = 1");
      } else if (kind == "composition") {
        ++comp;
        o.require(c < 1e-10 && f < 1e-10, "composition residual < 1e-10");
      } else if (kind == "garding") {
        ++gard;
        o.require(c >= 0.0 && f >= 0.0, "Garding ratio >= 0");
      }
    }
  }
  o.require(cv > 0 && comp > 0 && gard > 0, "all probe kinds present");
  o.note(std::to_string(cv + comp + gard) + " probes");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"regularization scaling", regularization_scaling},
      {"mollifier order", mollifier_order},
      {"S' convergence", sprime_convergence},
      {"solver validation", solver_validation},
      {"conjugation identity", conjugation},
      {"existence / moderateness", existence},
      {"uniqueness / negligibility", uniqueness},
      {"consistency", consistency},
      {"classical regime", classical},
      {"symbol calculus probes", probes},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %-28s %s  %s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
