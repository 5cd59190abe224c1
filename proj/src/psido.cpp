#include "vwslab/psido.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "vwslab/errors.hpp"

namespace vwslab {

namespace {

const cplx kI(0.0, 1.0);

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

SmoothFunction differentiate(const SmoothFunction& f, int n) {
  if (n < 0) throw DerivativeOrderError("negative derivative order");
  if (n == 0 || f.is_zero()) return f;
  if (n > f.max_order()) throw DerivativeOrderError("derivative order exceeds the function's smoothness");
  return SmoothFunction([f, n](double x, int k) { return f(x, k + n); }, f.max_order() - n);
}

SmoothFunction abs_function() {
  return SmoothFunction(
      [](double x, int k) -> cplx {
        if (k == 0) return std::abs(x);
        if (k == 1) return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
        return 0.0;
      },
      64);
}

SymbolSpec SymbolSpec::multiplier(SmoothFunction mu, double order, std::string label) {
  SymbolSpec p;
  p.terms_.push_back({constant_function(1.0), std::move(mu), true, false});
  p.order_ = order;
  p.label_ = std::move(label);
  return p;
}

SymbolSpec SymbolSpec::multiplication(SmoothFunction a, std::string label) {
  SymbolSpec p;
  p.terms_.push_back({std::move(a), constant_function(1.0), false, true});
  p.label_ = std::move(label);
  return p;
}

SymbolSpec SymbolSpec::separable(SmoothFunction a, SmoothFunction mu, double order, std::string label) {
  SymbolSpec p;
  p.terms_.push_back({std::move(a), std::move(mu), false, false});
  p.order_ = order;
  p.label_ = std::move(label);
  return p;
}

SymbolSpec SymbolSpec::from_terms(std::vector<Term> terms, double order, std::string label) {
  SymbolSpec p;
  p.terms_ = std::move(terms);
  p.order_ = order;
  p.label_ = std::move(label);
  return p;
}

SymbolSpec SymbolSpec::japanese(double m) {
  return multiplier(japanese_power(m), m, "<xi>^" + std::to_string(m));
}

SymbolSpec SymbolSpec::xi_power(int k) {
  if (k < 0) throw DomainError("xi_power needs k >= 0");
  std::vector<cplx> c(static_cast<std::size_t>(k) + 1, 0.0);
  c.back() = 1.0;
  return multiplier(polynomial_function(std::move(c)), k, "xi^" + std::to_string(k));
}

SymbolSpec SymbolSpec::operator+(const SymbolSpec& o) const {
  SymbolSpec p = *this;
  p.terms_.insert(p.terms_.end(), o.terms_.begin(), o.terms_.end());
  p.order_ = std::max(order_, o.order_);
  p.label_ = label_ + " + " + o.label_;
  return p;
}

cplx SymbolSpec::derivative(double x, double xi, int alpha, int beta) const {
  cplx acc = 0.0;
  for (const auto& t : terms_) {
    if ((t.a_constant && beta > 0) || (t.mu_constant && alpha > 0)) continue;
    acc += t.a(x, beta) * t.mu(xi, alpha);
  }
  return acc;
}

bool SymbolSpec::x_independent() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.a_constant; });
}

bool SymbolSpec::xi_independent() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.mu_constant; });
}

std::vector<double> SymbolSpec::seminorms(const Grid& grid, int max_l) const {
  if (max_l < 0) throw DomainError("seminorm order must be non-negative");
  const std::size_t n = grid.size();
  std::vector<double> xs(n), xis(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = grid.x(i);
    xis[i] = grid.xi(i);
  }
  std::vector<double> out(static_cast<std::size_t>(max_l) + 1, 0.0);
  for (int l = 0; l <= max_l; ++l) {
    double best = l > 0 ? out[static_cast<std::size_t>(l) - 1] : 0.0;
    for (int alpha = 0; alpha <= l; ++alpha) {
      const int beta = l - alpha;
      std::vector<std::vector<cplx>> A, Mu;
      for (const auto& t : terms_) {
        if ((t.a_constant && beta > 0) || (t.mu_constant && alpha > 0)) continue;
        std::vector<cplx> a(n), mu(n);
        for (std::size_t i = 0; i < n; ++i) {
          a[i] = t.a(xs[i], beta);
          mu[i] = t.mu(xis[i], alpha);
        }
        A.push_back(std::move(a));
        Mu.push_back(std::move(mu));
      }
      if (A.empty()) continue;
      for (std::size_t k = 0; k < n; ++k) {
        const double w = std::pow(1.0 + xis[k] * xis[k], -0.5 * (order_ - alpha));
        for (std::size_t i = 0; i < n; ++i) {
          cplx v = 0.0;
          for (std::size_t t = 0; t < A.size(); ++t) v += A[t][i] * Mu[t][k];
          best = std::max(best, std::abs(v) * w);
        }
      }
    }
    out[static_cast<std::size_t>(l)] = best;
  }
  return out;
}

Field quantize_direct(const SymbolSpec& p, const Field& u) {
  const Grid& grid = u.grid();
  const std::size_t n = grid.size();
  // With x_j = -L + 2Lj/N the phases exp(+-i xi_k L) cancel between analysis
  // and synthesis, leaving a plain DFT pair.
  std::vector<cplx> raw(n);
  fft_forward(u.values().data(), raw.data(), n);
  std::vector<cplx> roots(n);
  for (std::size_t m = 0; m < n; ++m) roots[m] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n));
  Field out(grid);
  const std::size_t nyquist = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.x(i);
    cplx acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == nyquist) continue;
      acc += roots[(k * i) % n] * p(x, grid.xi(k)) * raw[k];
    }
    out[i] = acc / static_cast<double>(n);
  }
  return out;
}

Field quantize(const SymbolSpec& p, const Field& u) {
  // Each separable term a(x) mu(D) is a multiplier followed by a pointwise product.
  const Grid& grid = u.grid();
  Field out(grid);
  for (const auto& t : p.terms()) {
    const cplx mu0 = t.mu_constant ? t.mu(0.0) : 0.0;
    const Field v = apply_multiplier(u, [&](double xi) { return t.mu_constant ? mu0 : t.mu(xi); }, true);
    if (t.a_constant) {
      out.axpy(t.a(0.0), v);
    } else {
      for (std::size_t i = 0; i < v.size(); ++i) out[i] += t.a(grid.x(i)) * v[i];
    }
  }
  return out;
}

SymbolSpec composition_symbol(const SymbolSpec& p1, const SymbolSpec& p2, int N) {
  if (N < 1) throw DomainError("composition needs N >= 1");
  std::vector<SymbolSpec::Term> terms;
  for (int alpha = 0; alpha < N; ++alpha) {
    const cplx coef = std::pow(-kI, alpha) / factorial(alpha);
    for (const auto& s : p1.terms()) {
      if (alpha > 0 && s.mu_constant) continue;
      for (const auto& t : p2.terms()) {
        if (alpha > 0 && t.a_constant) continue;
        terms.push_back({s.a * (coef * differentiate(t.a, alpha)), differentiate(s.mu, alpha) * t.mu,
                         s.a_constant && (alpha == 0 && t.a_constant), s.mu_constant && t.mu_constant});
      }
    }
  }
  return SymbolSpec::from_terms(std::move(terms), p1.order() + p2.order(),
                                "(" + p1.label() + ") # (" + p2.label() + ")");
}

CoefficientSet conjugated_coefficients(const CoefficientSet& c, int s) {
  const double ds = s;
  const SmoothFunction x = polynomial_function({0.0, 1.0});
  const SmoothFunction x_over = x * japanese_power(-2.0);  // x / <x>^2
  CoefficientSet out = c;
  out.tags.push_back("conjugated s=" + std::to_string(s));
  if (s == 0) return out;
  out.c1.terms.push_back({TimeProfile::constant(), cplx(0.0, 2.0 * ds) * x_over});
  for (const auto& term : c.c1.terms) out.c0.terms.push_back({term.profile, (cplx(0.0, ds) * x_over) * term.value});
  const SmoothFunction x2 = polynomial_function({0.0, 0.0, 1.0});
  out.c0.terms.push_back({TimeProfile::constant(), cplx(-ds * (ds + 2.0)) * (x2 * japanese_power(-4.0)) +
                                                       cplx(ds) * japanese_power(-2.0)});
  out.is_regular = false;
  return out;
}

Field spatial_operator(const CoefficientSet& c, double t, const Field& u) {
  // rhs = i u_xx - c1 u_x - i c0 u = -i P u.
  Field out = rhs(u, t, c, TimeCurve<Field>{}, false);
  out *= kI;
  return out;
}

double conjugation_identity_error(const CoefficientSet& c, int s, const Field& v, double t) {
  const Field lhs = spatial_operator(conjugated_coefficients(c, s), t, weight_multiply(v, s));
  const Field ref = weight_multiply(spatial_operator(c, t, v), s);
  const double denom = ref.l2_norm();
  const double diff = (lhs - ref).l2_norm();
  return denom > 0.0 ? diff / denom : diff;
}

double composition_residual(const SymbolSpec& p1, const SymbolSpec& p2, int N, const Grid& grid) {
  const SymbolSpec q = composition_symbol(p1, p2, N);
  double worst = 0.0;
  for (const auto& h : test_function_family()) {
    const Field u = h.sample(grid);
    const Field lhs = quantize(p1, quantize(p2, u));
    const Field r = quantize(q, u);
    worst = std::max(worst, (lhs - r).l2_norm() / u.l2_norm());
  }
  return worst;
}

double cv_ratio(const SymbolSpec& p, double s, const Grid& grid) {
  double worst = 0.0;
  for (const auto& h : test_function_family()) {
    const Field u = h.sample(grid);
    const double num = weighted_sobolev_norm(quantize(p, u), s, 0.0).value;
    const double den = weighted_sobolev_norm(u, s + p.order(), 0.0).value;
    worst = std::max(worst, num / den);
  }
  return worst;
}

double garding_ratio(const SymbolSpec& p, const Grid& grid) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& h : test_function_family()) {
    const Field u = h.sample(grid);
    best = std::min(best, std::real(inner(u, quantize(p, u))) / std::real(inner(u, u)));
  }
  return best;
}

namespace {

// Values below this are roundoff-level residuals; their relative change is noise.
constexpr double kProbeFloor = 1e-10;

ProbeResult finish(std::string probe, std::string symbol, double coarse, double fine) {
  ProbeResult r;
  r.probe = std::move(probe);
  r.symbol = std::move(symbol);
  r.coarse = coarse;
  r.fine = fine;
  const double scale = std::max(std::abs(coarse), std::abs(fine));
  r.relative_change = scale > 0.0 ? std::abs(fine - coarse) / scale : 0.0;
  r.refinement_stable = r.relative_change <= kRefinementTolerance || scale < kProbeFloor;
  return r;
}

}  // namespace

ProbeResult cv_bound_probe(const SymbolSpec& p, double s, const ProbeGrids& grids) {
  return finish("cv_bound s=" + std::to_string(s), p.label(), cv_ratio(p, s, grids.coarse), cv_ratio(p, s, grids.fine));
}

ProbeResult garding_probe(const SymbolSpec& p, const ProbeGrids& grids) {
  return finish("garding", p.label(), garding_ratio(p, grids.coarse), garding_ratio(p, grids.fine));
}

ProbeResult composition_probe(const SymbolSpec& p1, const SymbolSpec& p2, int N, const ProbeGrids& grids) {
  return finish("composition N=" + std::to_string(N), p1.label() + " o " + p2.label(),
                composition_residual(p1, p2, N, grids.coarse), composition_residual(p1, p2, N, grids.fine));
}

}  // namespace vwslab
