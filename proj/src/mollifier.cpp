#include "vwslab/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "vwslab/errors.hpp"
#include "vwslab/quadrature.hpp"

namespace vwslab {

// ------------------------------------------------------------- MollifierPair

MollifierPair MollifierPair::gaussian() {
  return MollifierPair{"gaussian", Cutoff::gaussian(), MollifierKernel::gaussian(), 1};
}

MollifierPair MollifierPair::flat() {
  return MollifierPair{"flat", Cutoff::flat(), MollifierKernel::flat(), std::nullopt};
}

MollifierPair MollifierPair::from_name(const std::string& name) {
  if (name == "gaussian") return gaussian();
  if (name == "flat") return flat();
  throw ConfigError("unknown mollifier pair '" + name + "' (expected gaussian or flat)");
}

// -------------------------------------------------------------- EpsilonScale

EpsilonScale EpsilonScale::identity() { return EpsilonScale(Kind::identity, 1.0, 0); }

EpsilonScale EpsilonScale::power(double r) {
  if (!(r > 0.0)) throw DomainError("power scale exponent must be positive");
  return EpsilonScale(Kind::power, r, 0);
}

EpsilonScale EpsilonScale::iterated_log(int depth) {
  if (depth < 1 || depth > 4) throw DomainError("iterated-log depth must be in 1..4");
  return EpsilonScale(Kind::iterated_log, 1.0, depth);
}

std::string EpsilonScale::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::identity: os << "identity"; break;
    case Kind::power: os << "power(r=" << r_ << ")"; break;
    case Kind::iterated_log: os << "iterated_log(depth=" << depth_ << ")"; break;
  }
  return os.str();
}

namespace {

// exp applied `times` times to 1: the value log^{(d)}(1/eps) must exceed,
// i.e. 1/eps > exp^{(d)}(1).
double tower(int times) {
  double v = 1.0;
  for (int i = 0; i < times; ++i) v = std::exp(v);
  return v;
}

// Natural log of exp^{(d)}(1), which stays finite one level beyond tower().
double log_tower(int d) { return tower(d - 1); }

}  // namespace

double EpsilonScale::eps_max() const {
  if (kind_ != Kind::iterated_log) return 1.0;
  return std::exp(-log_tower(depth_));  // underflows to 0 for depth 4
}

bool EpsilonScale::in_domain(double eps) const {
  if (!(eps > 0.0 && eps <= 1.0)) return false;
  if (kind_ != Kind::iterated_log) return true;
  double v = 1.0 / eps;
  for (int i = 0; i < depth_; ++i) {
    if (!(v > 0.0)) return false;
    v = std::log(v);
  }
  return v > 1.0;
}

double EpsilonScale::omega(double eps) const {
  if (!in_domain(eps)) {
    std::ostringstream os;
    os << "eps = " << eps << " outside the domain of the " << describe() << " scale: ";
    if (kind_ == Kind::iterated_log)
      os << "requires log^(" << depth_ << ")(1/eps) > 1, i.e. eps < exp(-" << log_tower(depth_) << ")"
         << (eps_max() == 0.0 ? " (no double precision value qualifies)" : "");
    else
      os << "requires 0 < eps <= 1";
    throw DomainError(os.str());
  }
  switch (kind_) {
    case Kind::identity: return eps;
    case Kind::power: return std::pow(eps, r_);
    case Kind::iterated_log: {
      double v = 1.0 / eps;
      for (int i = 0; i < depth_; ++i) v = std::log(v);
      return 1.0 / v;
    }
  }
  return eps;
}

std::pair<double, double> EpsilonScale::lower_bound() const {
  if (kind_ == Kind::power) return {1.0, r_};
  return {1.0, 1.0};
}

std::vector<double> EpsilonScale::default_grid(int count) const {
  std::vector<double> out;
  for (int k = 1; k <= 1074 && static_cast<int>(out.size()) < count; ++k) {
    const double e = std::ldexp(1.0, -k);
    if (in_domain(e)) out.push_back(e);
  }
  if (static_cast<int>(out.size()) < count)
    throw DomainError("no " + std::to_string(count) + "-point dyadic grid fits the domain of the " + describe() +
                      " scale");
  return out;
}

// ---------------------------------------------------------------- regularize

SmoothFunction regularize_at(const DistributionExpr& u, const MollifierPair& pair, double omega) {
  const SmoothFunction v = convolve_mollifier(u, pair.psi, omega);
  if (v.is_zero()) return v;
  const Cutoff phi = pair.phi;
  return SmoothFunction(
      [v, phi, omega](double x, int k) {
        const double z = omega * x;
        cplx acc = phi.value(z, 0) * v(x, k);
        double wj = 1.0;
        for (int j = 1; j <= k; ++j) {
          wj *= omega;
          const double d = phi.value(z, j);
          if (d != 0.0) acc += binomial(k, j) * wj * d * v(x, k - j);
        }
        return acc;
      },
      std::min(v.max_order(), MollifierKernel::kMaxOrder));
}

SmoothFunction regularize(const DistributionExpr& u, const MollifierPair& pair, const EpsilonScale& scale,
                          double eps) {
  return regularize_at(u, pair, scale.omega(eps));
}

TimeCurve<SmoothFunction> regularize_curve(const TimeCurve<DistributionExpr>& c, const MollifierPair& pair,
                                           const EpsilonScale& scale, double eps) {
  const double w = scale.omega(eps);
  return c.map([&](const DistributionExpr& u) { return regularize_at(u, pair, w); });
}

cplx evaluate_curve(const TimeCurve<SmoothFunction>& c, double t, double x, int order) {
  cplx acc = 0.0;
  for (const auto& term : c.terms) {
    const cplx a = term.profile(t);
    if (a != cplx(0.0)) acc += a * term.value(x, order);
  }
  return acc;
}

std::vector<double> probe_grid(double R, int points) {
  std::vector<double> x(points);
  for (int i = 0; i < points; ++i) x[i] = -R + 2.0 * R * i / (points - 1);
  return x;
}

double probe_seminorm(const SmoothFunction& f, int M, int beta, double R, int points) {
  double best = 0.0;
  for (double x : probe_grid(R, points))
    best = std::max(best, std::pow(1.0 + x * x, 0.5 * M) * std::abs(f(x, beta)));
  return best;
}

double curve_probe_seminorm(const TimeCurve<SmoothFunction>& c, const std::vector<double>& t_nodes, int M, int beta,
                            double R, int points) {
  double best = 0.0;
  for (double t : t_nodes)
    for (double x : probe_grid(R, points))
      best = std::max(best, std::pow(1.0 + x * x, 0.5 * M) * std::abs(evaluate_curve(c, t, x, beta)));
  return best;
}

// ------------------------------------------------------ regularization error

namespace {

// Radius outside which <x>^M |u^{(beta)}| < 1e-12.
double weighted_tail_radius(const TestFunction& u, int M, int beta) {
  const double reach = std::abs(u.center()) + 3.0 * u.support_radius() + 5.0;
  double last = 1.0;
  for (double x = 0.0; x <= reach; x += 0.05)
    for (double s : {-1.0, 1.0})
      if (std::pow(1.0 + x * x, 0.5 * M) * std::abs(u(s * x, beta)) >= 1e-12) last = x;
  return last + 0.5;
}

// Samples of d^k/dx^k (psi_w * u - u) at x_j = -R + j (2R / n), j < n, from the
// exact transform (psi^(w xi) - 1) u^(xi) (i xi)^k. The inverse DFT runs on a
// doubled period so wrap-around images stay outside [-R, R].
std::vector<cplx> kernel_defect(const TestFunction& u, const MollifierKernel& psi, double w, double R, int n,
                                int k) {
  const std::size_t N = 2 * static_cast<std::size_t>(n);
  const double period = 4.0 * R;
  const double dxi = 2.0 * std::numbers::pi / period;
  std::vector<cplx> spec(N);
  for (std::size_t m = 0; m < N; ++m) {
    const long idx = m < N / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(N);
    const double xi = dxi * static_cast<double>(idx);
    const double defect = psi.fourier_minus_one(w * xi);
    if (defect == 0.0) continue;
    // shift so that slot j of the inverse DFT sits at x = -2R + j dx
    spec[m] = defect * u.fourier(xi) * std::pow(cplx(0.0, xi), k) * std::polar(1.0, -2.0 * R * xi);
  }
  std::vector<cplx> out(N);
  fft_backward(spec.data(), out.data(), N);
  std::vector<cplx> values(n);
  const std::size_t offset = N / 4;  // x = -R
  for (int j = 0; j < n; ++j) values[j] = out[offset + j] * (dxi / (2.0 * std::numbers::pi));
  return values;
}

}  // namespace

double regularization_error(const TestFunction& u, const MollifierPair& pair, double eps, int M, int beta,
                            const EpsilonScale& scale) {
  if (u.is_zero()) return 0.0;
  const double w = scale.omega(eps);
  const double R = weighted_tail_radius(u, M, beta);
  constexpr int kProbe = 4096;
  std::vector<std::vector<cplx>> defect(beta + 1);
  for (int k = 0; k <= beta; ++k) defect[k] = kernel_defect(u, pair.psi, w, R, kProbe, k);
  double best = 0.0;
  for (int i = 0; i < kProbe; ++i) {
    const double x = -R + 2.0 * R * i / kProbe;
    const auto ud = u.derivatives(x, beta);
    const double z = w * x;
    cplx e = defect[beta][i];
    const double pm1 = pair.phi.minus_one(z);
    if (pm1 != 0.0) e += pm1 * (ud[beta] + defect[beta][i]);
    double wj = 1.0;
    for (int j = 1; j <= beta; ++j) {
      wj *= w;
      const double pj = pair.phi.value(z, j);
      if (pj != 0.0) e += binomial(beta, j) * wj * pj * (ud[beta - j] + defect[beta - j][i]);
    }
    best = std::max(best, std::pow(1.0 + x * x, 0.5 * M) * std::abs(e));
  }
  return best;
}

cplx pair_regularized(const DistributionExpr& u, const TestFunction& h, const MollifierPair& pair,
                      const EpsilonScale& scale, double eps) {
  const double w = scale.omega(eps);
  const SmoothFunction v = regularize_at(u, pair, w);
  const auto centers = u.centers();
  return pair_smooth(v, h, centers, w);
}

}  // namespace vwslab
