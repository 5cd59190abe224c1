#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace vwslab {

using cplx = std::complex<double>;

/// Pointwise-evaluable smooth function x -> f^{(k)}(x), k <= max_order().
///
/// Handles are immutable and cheap to copy; the evaluator is shared.
class SmoothFunction {
 public:
  using Evaluator = std::function<cplx(double x, int order)>;

  /// The zero function (any derivative order).
  SmoothFunction();
  SmoothFunction(Evaluator eval, int max_order);

  /// Throws DerivativeOrderError when order exceeds max_order().
  cplx operator()(double x, int order = 0) const;
  int max_order() const { return max_order_; }
  bool is_zero() const { return !eval_; }

  /// Restricts the admissible derivative order (never raises it).
  SmoothFunction with_max_order(int order) const;

 private:
  std::shared_ptr<const Evaluator> eval_;
  int max_order_;
};

SmoothFunction operator+(const SmoothFunction& a, const SmoothFunction& b);
SmoothFunction operator-(const SmoothFunction& a, const SmoothFunction& b);
SmoothFunction operator*(cplx s, const SmoothFunction& f);
/// Pointwise product; derivatives by Leibniz' rule.
SmoothFunction operator*(const SmoothFunction& a, const SmoothFunction& b);
/// x -> f(scale * x), derivatives by the chain rule.
SmoothFunction dilate(const SmoothFunction& f, double scale);
/// x -> f(x - shift).
SmoothFunction translate(const SmoothFunction& f, double shift);

SmoothFunction constant_function(cplx c);
/// sum_j coefficients[j] x^j.
SmoothFunction polynomial_function(std::vector<cplx> coefficients);
/// <x>^s = (1 + x^2)^{s/2}.
SmoothFunction japanese_power(double s);

/// Derivatives of <x>^s of orders 0..n at x, by the three-term recurrence
/// (1+x^2) w^{(k+1)} = (s-2k) x w^{(k)} + k (s-k+1) w^{(k-1)}.
std::vector<double> japanese_power_derivatives(double x, double s, int n);

/// Physicists' Hermite polynomials H_0..H_n at x.
std::vector<double> hermite(double x, int n);

double binomial(int n, int k);

}  // namespace vwslab
