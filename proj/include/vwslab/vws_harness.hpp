#pragma once

// Epsilon-nets of regularized Cauchy problems and the verdicts drawn from
// them: moderateness, negligibility of perturbations, consistency with the
// classical solution and uniform bounds in the classical regime.

#include <optional>
#include <string>
#include <vector>

#include "vwslab/dist_catalog.hpp"
#include "vwslab/mollifier.hpp"
#include "vwslab/pde_solver.hpp"
#include "vwslab/powerlaw.hpp"
#include "vwslab/time_curve.hpp"

namespace vwslab {

/// Distributional inputs of S u = f, u(0) = g, before regularization.
struct ProblemTemplate {
  std::string id = "custom";
  TimeCurve<DistributionExpr> c1;
  TimeCurve<DistributionExpr> c0;
  TimeCurve<DistributionExpr> f;
  DistributionExpr g;
  double T = 0.5;
  Grid grid{40.0, 2048};
  /// Extra output times in (0, T).
  std::vector<double> t_nodes;
  bool dealias = true;
  DtPolicy dt;
};

/// Ids: "free", "delta-c0", "delta-c1", "heaviside-c0", "regular-c1",
/// "classical-decaying", "classical-nondecaying", "delta-data".
ProblemTemplate builtin_template(const std::string& id);
std::vector<std::string> builtin_template_ids();

/// (m, M) pairs with 0 <= m, M <= max_order.
std::vector<NormSpec> norm_ladder(int max_order = 3);

struct NetOptions {
  MollifierPair pair = MollifierPair::gaussian();
  /// Scale applied to the coefficients.
  EpsilonScale scale = EpsilonScale::identity();
  /// Data and source use plain eps unless this is set.
  bool data_uses_scale = false;
  /// Empty means scale.default_grid().
  std::vector<double> eps_grid;
  std::vector<NormSpec> ladder = norm_ladder();
  int jobs = 1;
  /// Overrides the template's step policy for every member when positive.
  double fixed_dt = 0.0;
};

struct NetMember {
  double eps = 0.0;
  double omega = 0.0;
  SolveReport report;
};

struct EpsilonNet {
  std::string template_id;
  std::string pair;
  std::string scale;
  std::vector<NetMember> members;

  bool any_aborted() const;
  std::vector<double> eps() const;
  /// ||u_eps(t)||_{H^{m,M}} per member; the sup over recorded nodes when t is empty.
  std::vector<double> norms(double m, double M, std::optional<double> t = std::nullopt) const;
};

/// Regularized coefficient set for one eps.
CoefficientSet regularize_coefficients(const ProblemTemplate& tpl, const NetOptions& opt, double eps);
/// Regularized problem for one eps (data on the data scale).
CauchyProblemSpec regularized_problem(const ProblemTemplate& tpl, const NetOptions& opt, double eps);
/// The template without regularization; every input must be smooth.
CauchyProblemSpec classical_problem(const ProblemTemplate& tpl, const std::vector<NormSpec>& ladder);

std::vector<double> resolve_eps_grid(const NetOptions& opt);

/// Solves one problem per eps (up to opt.jobs in parallel), merged in eps order.
EpsilonNet build_net(const ProblemTemplate& tpl, const NetOptions& opt);
/// Solves caller-built problems the same way.
EpsilonNet solve_net(const std::string& id, const std::vector<double>& eps, const std::vector<double>& omega,
                     const std::vector<CauchyProblemSpec>& problems, int jobs);

FitResult fit_powerlaw(const EpsilonNet& net, double m, double M, std::optional<double> t = std::nullopt,
                       const VerdictThresholds& th = {});

struct LadderFit {
  double m;
  double M;
  FitResult fit;
  std::vector<double> values;
};

struct ExistenceReport {
  EpsilonNet net;
  std::vector<LadderFit> fits;
  bool all_moderate = false;
  bool aborted = false;
  bool passed() const { return all_moderate && !aborted; }
};

ExistenceReport run_existence(const ProblemTemplate& tpl, const NetOptions& opt, const VerdictThresholds& th = {});

/// Which inputs receive the eps^q bump.
struct PerturbationTargets {
  bool c0 = false;
  bool c1 = false;
  bool data = true;
  /// The bump is amplitude * exp(-(x - center)^2).
  cplx amplitude = 1.0;
  double center = 0.0;
};

struct UniquenessReport {
  double q = 0.0;
  EpsilonNet base;
  EpsilonNet perturbed;
  /// Differences at T per tested norm.
  std::vector<LadderFit> fits;
  bool negligible = false;
  bool aborted = false;
  bool passed() const { return negligible && !aborted; }
};

/// Norms of u_eps(T) - u'_eps(T) in {H^{1,1}, H^{0,0}} unless `norms` is given.
UniquenessReport run_uniqueness(const ProblemTemplate& tpl, double q, const PerturbationTargets& targets,
                                const NetOptions& opt, const VerdictThresholds& th = {},
                                std::vector<NormSpec> norms = {{1.0, 1.0}, {0.0, 0.0}});

struct ConsistencyCurve {
  std::string pair;
  std::vector<double> eps;
  std::vector<double> errors;
  bool monotone = false;
  bool converged = false;
  PowerLawFit fit;
};

struct ConsistencyReport {
  NormSpec norm{1.0, 1.0};
  SolveReport reference;
  std::vector<ConsistencyCurve> curves;
  /// Final errors of all pairs differ by less than 2 * tolerance.
  bool limit_independent = false;
  bool aborted = false;
  bool passed() const;
};

/// Compares each pair's net with the unregularized solve at T, sharing its step.
ConsistencyReport run_consistency(const ProblemTemplate& tpl, const std::vector<MollifierPair>& pairs,
                                  const NetOptions& opt, NormSpec norm = {1.0, 1.0},
                                  const VerdictThresholds& th = {});

struct ClassicalReport {
  double m = 2.0;
  double s = 1.0;
  /// Derivative loss used in the numerator norm H^{m - loss, s}.
  double loss = 0.0;
  std::vector<double> eps;
  std::vector<double> ratios;
  double spread = 0.0;
  /// sup over nodes and t in {0, T/2, T} of <x> |Im c1_eps(t, x)| per member.
  std::vector<double> decay_constants;
  bool decay_condition = false;
  /// "uniform", "non-uniform" or "outside classical regime".
  std::string verdict;
  EpsilonNet net;
  bool aborted = false;
  bool passed() const { return verdict == "uniform" && !aborted; }
};

ClassicalReport run_classical(const ProblemTemplate& tpl, const NetOptions& opt, double m = 2.0, double s = 1.0,
                              double loss = 0.0, const VerdictThresholds& th = {});

}  // namespace vwslab
