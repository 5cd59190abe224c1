#pragma once

// Mollifier pairs, epsilon scales and the regularization map
//   u -> x |-> phi(w x) (psi_w * u)(x),  w = omega(eps).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vwslab/dist_catalog.hpp"
#include "vwslab/kernels.hpp"
#include "vwslab/smooth_function.hpp"
#include "vwslab/time_curve.hpp"

namespace vwslab {

struct MollifierPair {
  std::string name;
  Cutoff phi;
  MollifierKernel psi;
  /// Largest q with vanishing phi derivatives at 0 and psi moments of
  /// orders 1..q; nullopt means every order.
  std::optional<int> flatness_order;

  static MollifierPair gaussian();
  static MollifierPair flat();
  /// "gaussian" or "flat".
  static MollifierPair from_name(const std::string& name);
};

class EpsilonScale {
 public:
  enum class Kind { identity, power, iterated_log };

  static EpsilonScale identity();
  /// omega = eps^r, r > 0.
  static EpsilonScale power(double r);
  /// omega = 1 / log^{(depth)}(1/eps), depth in 1..4.
  static EpsilonScale iterated_log(int depth);

  Kind kind() const { return kind_; }
  double exponent() const { return r_; }
  int depth() const { return depth_; }
  std::string describe() const;

  /// Supremum of admissible eps (0 when no double qualifies).
  double eps_max() const;
  bool in_domain(double eps) const;
  /// Throws DomainError naming the threshold when eps is outside the domain.
  double omega(double eps) const;
  /// (c, r) with omega(eps) >= c eps^r on the domain.
  std::pair<double, double> lower_bound() const;
  /// The `count` largest powers 2^{-k} (k >= 1) inside the domain.
  std::vector<double> default_grid(int count = 6) const;

 private:
  EpsilonScale(Kind k, double r, int d) : kind_(k), r_(r), depth_(d) {}
  Kind kind_;
  double r_;
  int depth_;
};

/// phi(omega x)(psi_omega * u)(x) for an explicit omega.
SmoothFunction regularize_at(const DistributionExpr& u, const MollifierPair& pair, double omega);
SmoothFunction regularize(const DistributionExpr& u, const MollifierPair& pair, const EpsilonScale& scale,
                          double eps);
TimeCurve<SmoothFunction> regularize_curve(const TimeCurve<DistributionExpr>& c, const MollifierPair& pair,
                                           const EpsilonScale& scale, double eps);
/// Evaluates sum_k a_k(t) f_k at (t, x) with derivative order k.
cplx evaluate_curve(const TimeCurve<SmoothFunction>& c, double t, double x, int order = 0);

/// Symmetric probe grid of `points` nodes on [-R, R].
std::vector<double> probe_grid(double R, int points = 4096);
/// max over the probe grid of <x>^M |f^{(beta)}(x)|.
double probe_seminorm(const SmoothFunction& f, int M, int beta, double R, int points = 4096);
/// sup over t_nodes and the probe grid of <x>^M |d^beta c(t, x)|.
double curve_probe_seminorm(const TimeCurve<SmoothFunction>& c, const std::vector<double>& t_nodes, int M, int beta,
                            double R, int points = 4096);

/// sup over the probe grid of <x>^M |d^beta (phi(w x)(psi_w * u) - u)| with
/// w = omega(eps); evaluated without cancellation against u.
double regularization_error(const TestFunction& u, const MollifierPair& pair, double eps, int M, int beta,
                            const EpsilonScale& scale = EpsilonScale::identity());

/// <u_eps, h> for the regularized distribution.
cplx pair_regularized(const DistributionExpr& u, const TestFunction& h, const MollifierPair& pair,
                      const EpsilonScale& scale, double eps);

}  // namespace vwslab
