#pragma once

// JSON forms of the domain types. Readers are strict: every object is
// checked for unknown keys and errors name the offending path.

#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "vwslab/dist_catalog.hpp"
#include "vwslab/mollifier.hpp"
#include "vwslab/pde_solver.hpp"
#include "vwslab/powerlaw.hpp"
#include "vwslab/psido.hpp"
#include "vwslab/vws_harness.hpp"

namespace vwslab {

using Json = nlohmann::ordered_json;

/// Reads keys of one JSON object and rejects the ones never asked for.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path);

  bool has(const std::string& key) const;
  /// Throws ConfigError when the key is missing.
  const Json& at(const std::string& key);
  double number(const std::string& key);
  double number(const std::string& key, double fallback);
  int integer(const std::string& key);
  int integer(const std::string& key, int fallback);
  bool boolean(const std::string& key, bool fallback);
  std::string string(const std::string& key);
  std::string string(const std::string& key, const std::string& fallback);
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback);
  std::string child(const std::string& key) const { return path_ + "." + key; }
  const std::string& path() const { return path_; }

  /// Throws ConfigError naming the first key that was never read.
  void finish() const;

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> used_;
};

double number_at(const Json& j, const std::string& path);
int integer_at(const Json& j, const std::string& path);

/// A number or [re, im].
cplx complex_from_json(const Json& j, const std::string& path);
Json to_json(cplx z);

DistributionExpr distribution_from_json(const Json& j, const std::string& path);
Json to_json(const DistributionExpr& u);

TimeProfile profile_from_json(const Json& j, const std::string& path);
Json to_json(const TimeProfile& p);

/// A bare distribution (constant in t), {"terms": [...]} or {"keyframes": {...}}.
TimeCurve<DistributionExpr> curve_from_json(const Json& j, const std::string& path);
Json to_json(const TimeCurve<DistributionExpr>& c);

Grid grid_from_json(const Json& j, const std::string& path);
Json to_json(const Grid& g);

TestFunction test_function_from_json(const Json& j, const std::string& path);
Json to_json(const TestFunction& h);

EpsilonScale scale_from_json(const Json& j, const std::string& path);
Json to_json(const EpsilonScale& s);

DtPolicy dt_policy_from_json(const Json& j, const std::string& path);
Json to_json(const DtPolicy& d);

NormSpec norm_from_json(const Json& j, const std::string& path);
Json to_json(const NormSpec& n);
std::vector<NormSpec> norms_from_json(const Json& j, const std::string& path);

/// A builtin id, or an object {"base": id?, ...overrides}.
ProblemTemplate template_from_json(const Json& j, const std::string& path);
Json to_json(const ProblemTemplate& t);

NetOptions net_options_from_json(const Json& j, const std::string& path);
Json to_json(const NetOptions& o);

VerdictThresholds thresholds_from_json(const Json& j, const std::string& path);
Json to_json(const VerdictThresholds& t);

/// {"type": "japanese" | "xi_power" | "multiplication" | "separable" | "sum", ...}
SymbolSpec symbol_from_json(const Json& j, const std::string& path);

Json to_json(const PowerLawFit& f);
Json to_json(const FitResult& f);
Json to_json(const ProbeResult& p);
/// Norm table and step statistics (no field values).
Json to_json(const SolveReport& r);
Json to_json(const EpsilonNet& net);

}  // namespace vwslab
