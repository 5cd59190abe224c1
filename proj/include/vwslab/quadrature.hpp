#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature for complex-valued
// integrands on finite intervals, QUADPACK QAG style: the panel with the
// largest error estimate is bisected until the summed estimate meets
// max(abs_tol, rel_tol * |I|).

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace vwslab {

using cplx = std::complex<double>;

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  int max_subintervals = 20000;
};

struct QuadratureResult {
  cplx value{};
  double error_estimate = 0.0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

inline constexpr double kGkNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kGkWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  cplx value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const cplx fc = f(center);
  cplx kronrod = fc * kGkWeights[7];
  cplx gauss = fc * kGaussWeights[3];
  double abs_sum = std::abs(fc) * kGkWeights[7];
  cplx fv[15];
  fv[7] = fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kGkNodes[j];
    const cplx f1 = f(center - dx);
    const cplx f2 = f(center + dx);
    fv[j] = f1;
    fv[14 - j] = f2;
    kronrod += (f1 + f2) * kGkWeights[j];
    abs_sum += (std::abs(f1) + std::abs(f2)) * kGkWeights[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kGaussWeights[j / 2];
  }
  const cplx mean = kronrod * 0.5;
  double asc = std::abs(fc - mean) * kGkWeights[7];
  for (int j = 0; j < 7; ++j)
    asc += (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean)) * kGkWeights[j];
  const double resasc = asc * std::abs(half);
  const double resabs = abs_sum * std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * resabs, err);
  return Panel{a, b, kronrod * half, err};
}

}  // namespace detail

/// Integrates f over the union of consecutive panels [p0,p1], [p1,p2], ...
template <class F>
QuadratureResult integrate(F&& f, std::span<const double> breakpoints,
                           const QuadratureOptions& opt = {}) {
  QuadratureResult out;
  if (breakpoints.size() < 2) return out;
  std::priority_queue<detail::Panel> heap;
  cplx total{};
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) continue;
    auto p = detail::gk15(f, breakpoints[i], breakpoints[i + 1]);
    out.evaluations += 15;
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  int panels = static_cast<int>(heap.size());
  while (!heap.empty()) {
    const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    if (total_err <= target) {
      out.converged = true;
      break;
    }
    if (panels >= opt.max_subintervals) break;
    detail::Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  if (heap.empty()) out.converged = true;
  // Re-sum to shed accumulated update drift.
  cplx resum{};
  double err = 0.0;
  while (!heap.empty()) {
    resum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = resum;
  out.error_estimate = err;
  return out;
}

template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  const double bp[2] = {a, b};
  return integrate(std::forward<F>(f), std::span<const double>(bp, 2), opt);
}

/// Breakpoints splitting [a, b] into panels no wider than max_width.
inline std::vector<double> uniform_panels(double a, double b, double max_width) {
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / max_width)));
  std::vector<double> bp(n + 1);
  for (int i = 0; i <= n; ++i) bp[i] = a + (b - a) * i / n;
  bp[n] = b;
  return bp;
}

/// Merges sorted breakpoint lists, dropping duplicates and points outside [a, b].
inline std::vector<double> merge_breakpoints(std::vector<double> pts, double a, double b) {
  pts.push_back(a);
  pts.push_back(b);
  std::erase_if(pts, [&](double p) { return !(p >= a && p <= b); });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace vwslab
