#include "vwslab/dist_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vwslab/errors.hpp"

namespace vwslab {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

std::vector<cplx> complex_hermite(cplx z, int n) {
  std::vector<cplx> h(n + 1);
  h[0] = 1.0;
  if (n >= 1) h[1] = 2.0 * z;
  for (int k = 1; k < n; ++k) h[k + 1] = 2.0 * z * h[k] - 2.0 * static_cast<double>(k) * h[k - 1];
  return h;
}

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

// k-th power of 1 / (y - i) by repeated multiplication.
cplx inverse_power(double y, int k) {
  const cplx base = 1.0 / cplx(y, -1.0);
  cplx r = 1.0;
  for (int j = 0; j < k; ++j) r *= base;
  return r;
}

// sech^{(k)}(y) = sech(y) * P_k(tanh y), P_{k+1} = -t P_k + (1 - t^2) P_k'.
double sech_derivative(double y, int k) {
  const double ay = std::abs(y);
  const double sech = ay > 700.0 ? 0.0 : 1.0 / std::cosh(y);
  if (sech == 0.0) return 0.0;
  const double t = std::tanh(y);
  std::vector<double> p{1.0};
  for (int j = 0; j < k; ++j) {
    std::vector<double> q(p.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i + 1] -= p[i];  // -t P
      if (i >= 1) {      // (1 - t^2) P'
        q[i - 1] += static_cast<double>(i) * p[i];
        q[i + 1] -= static_cast<double>(i) * p[i];
      }
    }
    p = std::move(q);
  }
  double acc = 0.0;
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) acc = acc * t + p[i];
  return sech * acc;
}

cplx poly_eval(const std::vector<cplx>& c, double x, int k) {
  cplx acc = 0.0;
  for (int j = static_cast<int>(c.size()) - 1; j >= k; --j) {
    double falling = 1.0;
    for (int i = 0; i < k; ++i) falling *= (j - i);
    acc = acc * x + c[j] * falling;
  }
  return acc;
}

std::vector<double> panels_for(double a, double b, double width) { return uniform_panels(a, b, width); }

void check_quadrature(const QuadratureResult& r, double tol, const char* what) {
  if (!r.converged && r.error_estimate > 1e3 * tol)
    throw QuadratureError(std::string(what) + ": quadrature did not converge", r.error_estimate);
}

}  // namespace

// -------------------------------------------------------------- TestFunction

TestFunction::TestFunction(std::vector<cplx> poly, double center, double a, double kappa, std::string label)
    : poly_(std::move(poly)), c_(center), a_(a), kappa_(kappa), label_(std::move(label)) {
  if (!(a_ > 0.0)) throw DomainError("test function needs a positive gaussian rate");
  while (!poly_.empty() && poly_.back() == cplx(0.0)) poly_.pop_back();
}

TestFunction TestFunction::gaussian(double center, double width) {
  return TestFunction({1.0}, center, 1.0 / (width * width), 0.0, "gaussian");
}

std::vector<cplx> TestFunction::derivatives(double x, int n) const {
  std::vector<cplx> out(n + 1, 0.0);
  if (poly_.empty()) return out;
  const double y = x - c_;
  const double expo = -a_ * y * y;
  if (expo < -745.0) return out;
  const cplx base = std::exp(cplx(expo, kappa_ * x));
  // R_{j+1} = R_j' + R_j (-2 a y + i kappa), as coefficient vectors in y.
  std::vector<cplx> r = poly_;
  for (int j = 0; j <= n; ++j) {
    out[j] = poly_eval(r, y, 0) * base;
    if (j == n) break;
    std::vector<cplx> next(r.size() + 1, 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i >= 1) next[i - 1] += static_cast<double>(i) * r[i];
      next[i] += kI * kappa_ * r[i];
      next[i + 1] += -2.0 * a_ * r[i];
    }
    r = std::move(next);
  }
  return out;
}

cplx TestFunction::operator()(double x, int order) const { return derivatives(x, order)[order]; }

cplx TestFunction::fourier(double xi) const {
  if (poly_.empty()) return 0.0;
  const double eta = xi - kappa_;
  const double s = 2.0 * std::sqrt(a_);
  const double z = eta / s;
  if (z * z > 745.0) return 0.0;
  const auto h = hermite(z, static_cast<int>(poly_.size()) - 1);
  const cplx step = -kI / s;
  cplx acc = 0.0;
  cplx power = 1.0;
  for (std::size_t j = 0; j < poly_.size(); ++j) {
    acc += poly_[j] * power * h[j];
    power *= step;
  }
  const double g = std::sqrt(kPi / a_) * std::exp(-z * z);
  return std::polar(1.0, c_ * (kappa_ - xi)) * acc * g;
}

double TestFunction::spectral_reach() const {
  const double deg = static_cast<double>(poly_.size());
  return 2.0 * std::sqrt(a_) * std::sqrt(700.0 + 4.0 * deg);
}

double TestFunction::support_radius() const {
  if (poly_.empty()) return 0.0;
  double coef = 0.0;
  for (const auto& p : poly_) coef = std::max(coef, std::abs(p));
  const double lead = std::abs(poly_.front()) > 0.0 ? std::abs(poly_.front()) : coef;
  double y = std::sqrt(40.0 / a_);
  for (int it = 0; it < 200; ++it) {
    double bound = 0.0;
    for (std::size_t j = 0; j < poly_.size(); ++j) bound += std::abs(poly_[j]) * std::pow(y, static_cast<double>(j));
    if (std::log(bound / lead) - a_ * y * y < -39.2) return y;
    y *= 1.05;
  }
  return y;
}

double TestFunction::seminorm(int order) const {
  if (poly_.empty()) return 0.0;
  const double R = 1.5 * support_radius() + 2.0;
  constexpr int kProbe = 4096;
  double best = 0.0;
  for (int i = 0; i < kProbe; ++i) {
    const double x = c_ - R + 2.0 * R * i / (kProbe - 1);
    const auto d = derivatives(x, order);
    for (int M = 0; M <= order; ++M) {
      const double w = std::pow(1.0 + x * x, 0.5 * M);
      for (int b = 0; b <= order; ++b) best = std::max(best, w * std::abs(d[b]));
    }
  }
  return best;
}

SmoothFunction TestFunction::handle() const {
  if (poly_.empty()) return SmoothFunction();
  return SmoothFunction([h = *this](double x, int k) { return h(x, k); }, kCatalogMaxOrder);
}

Field TestFunction::sample(const Grid& grid) const {
  return Field::from_function(grid, [this](double x) { return (*this)(x); });
}

std::vector<TestFunction> test_function_family() {
  return {
      TestFunction({1.0}, 0.0, 1.0, 0.0, "gauss"),
      TestFunction({1.0}, 0.5, 0.5, 0.0, "gauss-wide-shifted"),
      TestFunction({0.0, 1.0}, 0.0, 1.0, 0.0, "odd-hermite"),
      TestFunction({1.0}, 0.0, 1.0, 1.0, "gauss-mod1"),
      TestFunction({1.0, 0.0, 0.5}, -0.3, 0.5, 0.0, "quadratic-wide"),
      TestFunction({1.0}, -1.0, 0.5, -1.5, "gauss-mod-neg"),
      TestFunction({1.0, -1.0, 0.25}, 0.2, 0.75, 0.0, "quadratic-mixed"),
      TestFunction({1.0}, 0.0, 0.25, 0.5, "gauss-broad-mod"),
      TestFunction({cplx(0.0, 1.0)}, 1.0, 1.0, 0.0, "imaginary-shifted"),
      TestFunction({0.0, 0.0, 1.0}, 0.0, 1.0, 1.5, "quadratic-mod"),
  };
}

// ------------------------------------------------------------- CatalogSmooth

std::string to_string(SmoothKind k) {
  switch (k) {
    case SmoothKind::gaussian: return "gaussian";
    case SmoothKind::sech: return "sech";
    case SmoothKind::sine_pack: return "sine_pack";
    case SmoothKind::lorentzian: return "lorentzian";
    case SmoothKind::lorentzian_odd: return "lorentzian_odd";
  }
  return "?";
}

SmoothKind smooth_kind_from_string(const std::string& name) {
  for (auto k : {SmoothKind::gaussian, SmoothKind::sech, SmoothKind::sine_pack, SmoothKind::lorentzian,
                 SmoothKind::lorentzian_odd})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown catalog function '" + name + "'");
}

cplx CatalogSmooth::operator()(double x, int order) const {
  if (order < 0 || order > kCatalogMaxOrder)
    throw DerivativeOrderError("catalog derivative order " + std::to_string(order) + " exceeds " +
                               std::to_string(kCatalogMaxOrder));
  const double y = (x - center) / width;
  const double scale = std::pow(width, -order);
  const double sign = (order % 2 == 0) ? 1.0 : -1.0;
  switch (kind) {
    case SmoothKind::gaussian: {
      if (y * y > 745.0) return 0.0;
      return scale * sign * hermite(y, order)[order] * std::exp(-y * y);
    }
    case SmoothKind::sech:
      return scale * sech_derivative(y, order);
    case SmoothKind::lorentzian:
      return scale * sign * factorial(order) * inverse_power(y, order + 1).imag();
    case SmoothKind::lorentzian_odd:
      return scale * sign * factorial(order) * inverse_power(y, order + 1).real();
    case SmoothKind::sine_pack: {
      // Im d^k/du^k exp(-a u^2 + i k u) with u = x - center, a = 1/w^2.
      const double u = x - center;
      const double a = 1.0 / (width * width);
      const double sa = std::sqrt(a);
      const cplx z = sa * (u - kI * wavenumber / (2.0 * a));
      const cplx ez = std::exp(-z * z - wavenumber * wavenumber / (4.0 * a));
      const cplx d = std::pow(-sa, order) * complex_hermite(z, order)[order] * ez;
      return d.imag();
    }
  }
  return 0.0;
}

cplx CatalogSmooth::fourier_centered(double xi) const {
  const double w = width;
  switch (kind) {
    case SmoothKind::gaussian:
      return w * std::sqrt(kPi) * std::exp(-0.25 * w * w * xi * xi);
    case SmoothKind::sech: {
      const double arg = 0.5 * kPi * w * std::abs(xi);
      return arg > 700.0 ? 0.0 : w * kPi / std::cosh(arg);
    }
    case SmoothKind::lorentzian:
      return w * kPi * std::exp(-w * std::abs(xi));
    case SmoothKind::lorentzian_odd: {
      const double sgn = xi > 0.0 ? 1.0 : (xi < 0.0 ? -1.0 : 0.0);
      return -kI * kPi * w * sgn * std::exp(-w * std::abs(xi));
    }
    case SmoothKind::sine_pack: {
      auto g = [w](double e) { return w * std::sqrt(kPi) * std::exp(-0.25 * w * w * e * e); };
      return (g(xi - wavenumber) - g(xi + wavenumber)) / (2.0 * kI);
    }
  }
  return 0.0;
}

double CatalogSmooth::spectral_reach() const {
  switch (kind) {
    case SmoothKind::gaussian: return std::sqrt(180.0) * 2.0 / (2.0 * width);
    case SmoothKind::sech: return 2.0 * 46.0 / (kPi * width);
    case SmoothKind::lorentzian:
    case SmoothKind::lorentzian_odd: return 45.0 / width;
    case SmoothKind::sine_pack: return std::abs(wavenumber) + 2.0 * std::sqrt(45.0) / width;
  }
  return 0.0;
}

SmoothFunction CatalogSmooth::handle() const {
  return SmoothFunction([s = *this](double x, int k) { return s(x, k); }, kCatalogMaxOrder);
}

// ---------------------------------------------------------- DistributionExpr

DistributionExpr::DistributionExpr() : DistributionExpr(Node(Polynomial{})) {}

DistributionExpr DistributionExpr::delta(double center, int order) {
  if (order < 0) throw DomainError("delta derivative order must be nonnegative");
  if (order > MollifierKernel::kMaxOrder)
    throw DerivativeOrderError("delta derivative order " + std::to_string(order) + " exceeds " +
                               std::to_string(MollifierKernel::kMaxOrder));
  return DistributionExpr(Node(DiracDelta{center, order}));
}

DistributionExpr DistributionExpr::heaviside(double center) { return DistributionExpr(Node(Heaviside{center})); }

DistributionExpr DistributionExpr::polynomial(std::vector<cplx> coefficients) {
  while (!coefficients.empty() && coefficients.back() == cplx(0.0)) coefficients.pop_back();
  return DistributionExpr(Node(Polynomial{std::move(coefficients)}));
}

DistributionExpr DistributionExpr::constant(cplx value) { return polynomial({value}); }

DistributionExpr DistributionExpr::smooth(SmoothKind kind, double center, double width, double wavenumber) {
  if (!(width > 0.0)) throw DomainError("catalog width must be positive");
  return DistributionExpr(Node(CatalogSmooth{kind, center, width, wavenumber}));
}

DistributionExpr DistributionExpr::scaled(cplx scalar, DistributionExpr inner) {
  if (scalar == cplx(0.0)) throw DomainError("Scaled requires a nonzero scalar");
  return DistributionExpr(Node(ScaledNode{scalar, std::make_shared<const DistributionExpr>(std::move(inner))}));
}

DistributionExpr DistributionExpr::sum(std::vector<DistributionExpr> terms) {
  if (terms.size() < 2) throw DomainError("Sum requires at least two terms");
  return DistributionExpr(Node(SumNode{std::move(terms)}));
}

DistributionExpr operator+(const DistributionExpr& a, const DistributionExpr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return DistributionExpr::sum({a, b});
}

DistributionExpr operator*(cplx s, const DistributionExpr& u) {
  if (s == cplx(0.0)) return DistributionExpr();
  return DistributionExpr::scaled(s, u);
}

namespace {
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;
}  // namespace

int DistributionExpr::order() const {
  return std::visit(Overloaded{
                        [](const DiracDelta& d) { return d.order; },
                        [](const Heaviside&) { return 0; },
                        [](const Polynomial& p) { return std::max(0, static_cast<int>(p.coefficients.size()) - 1); },
                        [](const CatalogSmooth&) { return 0; },
                        [](const ScaledNode& s) { return s.inner->order(); },
                        [](const SumNode& s) {
                          int m = 0;
                          for (const auto& t : s.terms) m = std::max(m, t.order());
                          return m;
                        },
                    },
                    *node_);
}

int DistributionExpr::max_delta_order() const {
  return std::visit(Overloaded{
                        [](const DiracDelta& d) { return d.order; },
                        [](const ScaledNode& s) { return s.inner->max_delta_order(); },
                        [](const SumNode& s) {
                          int m = 0;
                          for (const auto& t : s.terms) m = std::max(m, t.max_delta_order());
                          return m;
                        },
                        [](const auto&) { return 0; },
                    },
                    *node_);
}

bool DistributionExpr::is_singular() const {
  return std::visit(Overloaded{
                        [](const DiracDelta&) { return true; },
                        [](const ScaledNode& s) { return s.inner->is_singular(); },
                        [](const SumNode& s) {
                          return std::any_of(s.terms.begin(), s.terms.end(),
                                             [](const DistributionExpr& t) { return t.is_singular(); });
                        },
                        [](const auto&) { return false; },
                    },
                    *node_);
}

bool DistributionExpr::is_zero() const {
  const auto* p = std::get_if<Polynomial>(node_.get());
  return p && p->coefficients.empty();
}

std::vector<double> DistributionExpr::centers() const {
  return std::visit(Overloaded{
                        [](const DiracDelta& d) { return std::vector<double>{d.center}; },
                        [](const Heaviside& h) { return std::vector<double>{h.center}; },
                        [](const Polynomial&) { return std::vector<double>{}; },
                        [](const CatalogSmooth& s) { return std::vector<double>{s.center}; },
                        [](const ScaledNode& s) { return s.inner->centers(); },
                        [](const SumNode& s) {
                          std::vector<double> out;
                          for (const auto& t : s.terms) {
                            auto c = t.centers();
                            out.insert(out.end(), c.begin(), c.end());
                          }
                          return out;
                        },
                    },
                    *node_);
}

cplx DistributionExpr::point_value(double x) const {
  return std::visit(Overloaded{
                        [](const DiracDelta&) -> cplx {
                          throw SingularSampleError("singular: mollify first (delta cannot be sampled pointwise)");
                        },
                        [x](const Heaviside& h) -> cplx { return x > h.center ? 1.0 : (x == h.center ? 0.5 : 0.0); },
                        [x](const Polynomial& p) { return poly_eval(p.coefficients, x, 0); },
                        [x](const CatalogSmooth& s) { return s(x); },
                        [x](const ScaledNode& s) { return s.scalar * s.inner->point_value(x); },
                        [x](const SumNode& s) {
                          cplx acc = 0.0;
                          for (const auto& t : s.terms) acc += t.point_value(x);
                          return acc;
                        },
                    },
                    *node_);
}

std::string DistributionExpr::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const DiracDelta& d) {
                   os << "delta(" << d.center << ")";
                   if (d.order > 0) os << "^(" << d.order << ")";
                 },
                 [&](const Heaviside& h) { os << "H(" << h.center << ")"; },
                 [&](const Polynomial& p) {
                   os << "poly[";
                   for (std::size_t i = 0; i < p.coefficients.size(); ++i)
                     os << (i ? "," : "") << p.coefficients[i].real()
                        << (p.coefficients[i].imag() != 0.0 ? "+i" + std::to_string(p.coefficients[i].imag()) : "");
                   os << "]";
                 },
                 [&](const CatalogSmooth& s) {
                   os << to_string(s.kind) << "(c=" << s.center << ",w=" << s.width;
                   if (s.kind == SmoothKind::sine_pack) os << ",k=" << s.wavenumber;
                   os << ")";
                 },
                 [&](const ScaledNode& s) { os << "(" << s.scalar.real() << (s.scalar.imag() >= 0 ? "+" : "") << s.scalar.imag() << "i)*" << s.inner->describe(); },
                 [&](const SumNode& s) {
                   for (std::size_t i = 0; i < s.terms.size(); ++i) os << (i ? " + " : "") << s.terms[i].describe();
                 },
             },
             *node_);
  return os.str();
}

// ------------------------------------------------------------------- pairing

namespace {

std::vector<double> test_panels(const TestFunction& h, double lo, double hi) {
  const double width = std::min(0.5, kPi / (std::abs(h.kappa()) + 1.0));
  return panels_for(lo, hi, width);
}

cplx integrate_against(const TestFunction& h, const std::function<cplx(double)>& u, double lo, double hi,
                       std::vector<double> extra, const QuadratureOptions& opt) {
  if (!(hi > lo)) return 0.0;
  auto bp = test_panels(h, lo, hi);
  bp.insert(bp.end(), extra.begin(), extra.end());
  bp = merge_breakpoints(std::move(bp), lo, hi);
  auto f = [&](double x) { return u(x) * h(x); };
  auto r = integrate(f, std::span<const double>(bp), opt);
  check_quadrature(r, opt.abs_tol, "pair");
  return r.value;
}

}  // namespace

cplx pair(const DistributionExpr& u, const TestFunction& h, const QuadratureOptions& opt) {
  if (h.is_zero()) return 0.0;
  const double R = h.support_radius();
  const double lo = h.center() - R;
  const double hi = h.center() + R;
  return std::visit(
      Overloaded{
          [&](const DiracDelta& d) -> cplx {
            const double sign = (d.order % 2 == 0) ? 1.0 : -1.0;
            return sign * h(d.center, d.order);
          },
          [&](const Heaviside& H) -> cplx {
            return integrate_against(h, [](double) { return cplx(1.0); }, std::max(lo, H.center), hi, {}, opt);
          },
          [&](const Polynomial& p) -> cplx {
            if (p.coefficients.empty()) return 0.0;
            return integrate_against(h, [&](double x) { return poly_eval(p.coefficients, x, 0); }, lo, hi, {}, opt);
          },
          [&](const CatalogSmooth& s) -> cplx {
            std::vector<double> extra;
            for (int j = -8; j <= 8; ++j) extra.push_back(s.center + 0.5 * j * s.width);
            return integrate_against(h, [&](double x) { return s(x); }, lo, hi, extra, opt);
          },
          [&](const ScaledNode& s) -> cplx { return s.scalar * pair(*s.inner, h, opt); },
          [&](const SumNode& s) -> cplx {
            cplx acc = 0.0;
            for (const auto& t : s.terms) acc += pair(t, h, opt);
            return acc;
          },
      },
      u.node());
}

cplx pair_smooth(const SmoothFunction& v, const TestFunction& h, std::span<const double> extra_breakpoints,
                 double resolution, const QuadratureOptions& opt) {
  if (h.is_zero() || v.is_zero()) return 0.0;
  const double R = h.support_radius();
  std::vector<double> extra;
  for (double c : extra_breakpoints)
    for (int j = -40; j <= 40; ++j) extra.push_back(c + resolution * j);
  return integrate_against(h, [&](double x) { return v(x); }, h.center() - R, h.center() + R, extra, opt);
}

cplx pair_sampled(const DistributionExpr& u, const Field& h, double decay_threshold) {
  if (h.boundary_decay() > decay_threshold)
    throw DomainTruncationError("sampled test function does not decay at the grid boundary (ratio " +
                                std::to_string(h.boundary_decay()) + ")");
  return std::visit(Overloaded{
                        [&](const DiracDelta& d) -> cplx {
                          const double sign = (d.order % 2 == 0) ? 1.0 : -1.0;
                          return sign * spectral_evaluate(h, d.center, d.order);
                        },
                        [&](const ScaledNode& s) -> cplx { return s.scalar * pair_sampled(*s.inner, h, decay_threshold); },
                        [&](const SumNode& s) -> cplx {
                          cplx acc = 0.0;
                          for (const auto& t : s.terms) acc += pair_sampled(t, h, decay_threshold);
                          return acc;
                        },
                        [&](const auto&) -> cplx {
                          cplx acc = 0.0;
                          const auto& g = h.grid();
                          for (std::size_t i = 0; i < h.size(); ++i) acc += u.point_value(g.x(i)) * h[i];
                          return acc * g.spacing();
                        },
                    },
                    u.node());
}

// --------------------------------------------------------------- convolution

namespace {

// (psi_eps * s)^{(alpha)}(x) = (1/pi) Re int_0^Xi (i xi)^alpha psi^(eps xi) s0^(xi) e^{i (x-c) xi} dxi.
double smooth_convolution_fourier(const CatalogSmooth& s, const MollifierKernel& psi, double eps, double x,
                                  int alpha) {
  const double reach = std::min(s.spectral_reach(), psi.spectral_extent() / eps);
  const double shift = x - s.center;
  const double width = std::min(reach / 8.0, 2.0 * kPi / (std::abs(shift) + 1.0));
  std::vector<double> bp = panels_for(0.0, reach, width);
  if (psi.kind() == MollifierKernel::Kind::flat) {
    bp.push_back(1.0 / eps);
    bp.push_back(1.5 / eps);
  }
  if (s.kind == SmoothKind::sine_pack) bp.push_back(std::abs(s.wavenumber));
  bp = merge_breakpoints(std::move(bp), 0.0, reach);
  auto f = [&](double xi) {
    return std::pow(cplx(0.0, xi), alpha) * psi.fourier(eps * xi) * s.fourier_centered(xi) *
           std::polar(1.0, shift * xi);
  };
  constexpr double tol = 1e-12;
  auto r = integrate(f, std::span<const double>(bp), {tol, 0.0, 20000});
  check_quadrature(r, tol, "convolution");
  return r.value.real() / kPi;
}

SmoothFunction convolve_smooth(const CatalogSmooth& s, const MollifierKernel& psi, double eps) {
  if (s.kind == SmoothKind::gaussian && psi.kind() == MollifierKernel::Kind::gaussian) {
    const double W = std::sqrt(s.width * s.width + eps * eps);
    const double amp = s.width / W;
    const double c = s.center;
    return SmoothFunction(
        [W, amp, c](double x, int k) {
          const double y = (x - c) / W;
          if (y * y > 745.0) return cplx(0.0);
          const double sign = (k % 2 == 0) ? 1.0 : -1.0;
          return cplx(amp * std::pow(W, -k) * sign * hermite(y, k)[k] * std::exp(-y * y));
        },
        kCatalogMaxOrder);
  }
  return SmoothFunction([s, psi, eps](double x, int k) { return cplx(smooth_convolution_fourier(s, psi, eps, x, k)); },
                        kCatalogMaxOrder);
}

}  // namespace

SmoothFunction convolve_mollifier(const DistributionExpr& u, const MollifierKernel& psi, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("mollifier scale must lie in (0, 1]");
  return std::visit(
      Overloaded{
          [&](const DiracDelta& d) {
            const int k = d.order;
            const double a = d.center;
            return SmoothFunction(
                [psi, eps, k, a](double x, int alpha) {
                  return cplx(std::pow(eps, -1 - k - alpha) * psi.value((x - a) / eps, k + alpha));
                },
                MollifierKernel::kMaxOrder - k);
          },
          [&](const Heaviside& H) {
            const double a = H.center;
            return SmoothFunction(
                [psi, eps, a](double x, int alpha) {
                  const double z = (x - a) / eps;
                  if (alpha == 0) return cplx(psi.cdf(z));
                  return cplx(std::pow(eps, -alpha) * psi.value(z, alpha - 1));
                },
                MollifierKernel::kMaxOrder + 1);
          },
          [&](const Polynomial& p) {
            if (p.coefficients.empty()) return SmoothFunction();
            const int deg = static_cast<int>(p.coefficients.size()) - 1;
            std::vector<double> weights(deg + 1);
            double pw = 1.0;
            for (int j = 0; j <= deg; ++j) {
              weights[j] = psi.moment(j) * pw / factorial(j);
              pw *= -eps;
            }
            return SmoothFunction(
                [c = p.coefficients, weights, deg](double x, int alpha) {
                  cplx acc = 0.0;
                  for (int j = 0; j + alpha <= deg; ++j)
                    if (weights[j] != 0.0) acc += weights[j] * poly_eval(c, x, j + alpha);
                  return acc;
                },
                1 << 20);
          },
          [&](const CatalogSmooth& s) { return convolve_smooth(s, psi, eps); },
          [&](const ScaledNode& s) { return s.scalar * convolve_mollifier(*s.inner, psi, eps); },
          [&](const SumNode& s) {
            SmoothFunction acc;
            for (const auto& t : s.terms) acc = acc + convolve_mollifier(t, psi, eps);
            return acc;
          },
      },
      u.node());
}

Field sample(const DistributionExpr& u, const Grid& grid) {
  if (u.is_singular()) throw SingularSampleError("singular: mollify first (" + u.describe() + ")");
  return Field::from_function(grid, [&](double x) { return u.point_value(x); });
}

Field sample(const SmoothFunction& f, const Grid& grid) {
  return Field::from_function(grid, [&](double x) { return f(x); });
}

SmoothFunction as_smooth_function(const DistributionExpr& u) {
  return std::visit(Overloaded{
                        [&](const DiracDelta&) -> SmoothFunction {
                          throw DomainError("not a smooth function: " + u.describe());
                        },
                        [&](const Heaviside&) -> SmoothFunction {
                          throw DomainError("not a smooth function: " + u.describe());
                        },
                        [](const Polynomial& p) {
                          return p.coefficients.empty() ? SmoothFunction() : polynomial_function(p.coefficients);
                        },
                        [](const CatalogSmooth& s) { return s.handle(); },
                        [](const ScaledNode& s) { return s.scalar * as_smooth_function(*s.inner); },
                        [](const SumNode& s) {
                          SmoothFunction acc;
                          for (const auto& t : s.terms) acc = acc + as_smooth_function(t);
                          return acc;
                        },
                    },
                    u.node());
}

}  // namespace vwslab
