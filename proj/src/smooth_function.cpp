#include "vwslab/smooth_function.hpp"

#include <cmath>
#include <string>

#include "vwslab/errors.hpp"

namespace vwslab {

SmoothFunction::SmoothFunction() : max_order_(1 << 20) {}

SmoothFunction::SmoothFunction(Evaluator eval, int max_order)
    : eval_(std::make_shared<const Evaluator>(std::move(eval))), max_order_(max_order) {}

cplx SmoothFunction::operator()(double x, int order) const {
  if (order < 0 || order > max_order_)
    throw DerivativeOrderError("derivative order " + std::to_string(order) +
                               " exceeds configured maximum " + std::to_string(max_order_));
  if (!eval_) return 0.0;
  return (*eval_)(x, order);
}

SmoothFunction SmoothFunction::with_max_order(int order) const {
  SmoothFunction out = *this;
  out.max_order_ = std::min(order, max_order_);
  return out;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<double> hermite(double x, int n) {
  std::vector<double> h(n + 1);
  h[0] = 1.0;
  if (n >= 1) h[1] = 2.0 * x;
  for (int k = 1; k < n; ++k) h[k + 1] = 2.0 * x * h[k] - 2.0 * k * h[k - 1];
  return h;
}

SmoothFunction operator+(const SmoothFunction& a, const SmoothFunction& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return SmoothFunction([a, b](double x, int k) { return a(x, k) + b(x, k); },
                        std::min(a.max_order(), b.max_order()));
}

SmoothFunction operator-(const SmoothFunction& a, const SmoothFunction& b) {
  return a + cplx(-1.0) * b;
}

SmoothFunction operator*(cplx s, const SmoothFunction& f) {
  if (f.is_zero() || s == cplx(0.0)) return SmoothFunction();
  return SmoothFunction([s, f](double x, int k) { return s * f(x, k); }, f.max_order());
}

SmoothFunction operator*(const SmoothFunction& a, const SmoothFunction& b) {
  if (a.is_zero() || b.is_zero()) return SmoothFunction();
  return SmoothFunction(
      [a, b](double x, int k) {
        cplx acc = 0.0;
        for (int j = 0; j <= k; ++j) acc += binomial(k, j) * a(x, j) * b(x, k - j);
        return acc;
      },
      std::min(a.max_order(), b.max_order()));
}

SmoothFunction dilate(const SmoothFunction& f, double scale) {
  if (f.is_zero()) return f;
  return SmoothFunction(
      [f, scale](double x, int k) { return std::pow(scale, k) * f(scale * x, k); },
      f.max_order());
}

SmoothFunction translate(const SmoothFunction& f, double shift) {
  if (f.is_zero()) return f;
  return SmoothFunction([f, shift](double x, int k) { return f(x - shift, k); }, f.max_order());
}

SmoothFunction constant_function(cplx c) {
  if (c == cplx(0.0)) return SmoothFunction();
  return SmoothFunction([c](double, int k) { return k == 0 ? c : cplx(0.0); }, 1 << 20);
}

SmoothFunction polynomial_function(std::vector<cplx> coefficients) {
  return SmoothFunction(
      [c = std::move(coefficients)](double x, int k) {
        cplx acc = 0.0;
        for (int j = static_cast<int>(c.size()) - 1; j >= k; --j) {
          double falling = 1.0;
          for (int i = 0; i < k; ++i) falling *= (j - i);
          acc = acc * x + c[j] * falling;
        }
        return acc;
      },
      1 << 20);
}

std::vector<double> japanese_power_derivatives(double x, double s, int n) {
  std::vector<double> w(n + 1);
  const double q = 1.0 + x * x;
  w[0] = std::pow(q, 0.5 * s);
  if (n >= 1) w[1] = s * x * w[0] / q;
  for (int k = 1; k < n; ++k)
    w[k + 1] = ((s - 2.0 * k) * x * w[k] + k * (s - k + 1.0) * w[k - 1]) / q;
  return w;
}

SmoothFunction japanese_power(double s) {
  if (s == 0.0) return constant_function(1.0);
  return SmoothFunction(
      [s](double x, int k) { return cplx(japanese_power_derivatives(x, s, k)[k]); }, 64);
}

}  // namespace vwslab
