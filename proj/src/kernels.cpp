#include "vwslab/kernels.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <string>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "vwslab/binary_io.hpp"
#include "vwslab/errors.hpp"
#include "vwslab/quadrature.hpp"
#include "vwslab/smooth_function.hpp"

namespace vwslab {

namespace {

constexpr double kPi = std::numbers::pi;

// Derivatives b^{(0..n)}(s) of b = exp(g), g = -1/(s-1) - 1/(2-s), using
// (e^g)^{(m)} = sum_k C(m-1,k) g^{(k+1)} (e^g)^{(m-1-k)}.
std::vector<double> bump_density_derivatives(double s, int n) {
  std::vector<double> e(n + 1, 0.0);
  if (!(s > 1.0 && s < 2.0)) return e;
  const double u = s - 1.0;
  const double v = 2.0 - s;
  const double g = -1.0 / u - 1.0 / v;
  if (g < -700.0) return e;
  e[0] = std::exp(g);
  std::vector<double> gd(n + 1, 0.0);
  double fact = 1.0;
  for (int k = 1; k <= n; ++k) {
    fact *= k;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    gd[k] = -sign * fact * std::pow(u, -k - 1) - fact * std::pow(v, -k - 1);
  }
  for (int m = 1; m <= n; ++m) {
    double acc = 0.0;
    for (int k = 0; k <= m - 1; ++k) acc += binomial(m - 1, k) * gd[k + 1] * e[m - 1 - k];
    e[m] = acc;
  }
  return e;
}

double bump_density(double s) {
  if (!(s > 1.0 && s < 2.0)) return 0.0;
  const double g = -1.0 / (s - 1.0) - 1.0 / (2.0 - s);
  return g < -745.0 ? 0.0 : std::exp(g);
}

double gk_real(double a, double b) {
  auto f = [](double s) { return cplx(bump_density(s)); };
  return detail::gk15(f, a, b).value.real();
}

// Cumulative integrals of b on a uniform grid of [1, 2].
struct BumpTables {
  static constexpr int kCells = 4096;
  std::array<double, kCells + 1> head{};  // int_1^{r_j} b
  std::array<double, kCells + 1> tail{};  // int_{r_j}^2 b
  double total = 0.0;

  BumpTables() {
    std::array<double, kCells> cell{};
    for (int j = 0; j < kCells; ++j) {
      const double a = 1.0 + static_cast<double>(j) / kCells;
      const double b = 1.0 + static_cast<double>(j + 1) / kCells;
      auto f = [](double s) { return cplx(bump_density(s)); };
      cell[j] = integrate(f, a, b, {1e-22, 1e-15, 200}).value.real();
    }
    head[0] = 0.0;
    for (int j = 0; j < kCells; ++j) head[j + 1] = head[j] + cell[j];
    tail[kCells] = 0.0;
    for (int j = kCells - 1; j >= 0; --j) tail[j] = tail[j + 1] + cell[j];
    total = 0.5 * (head[kCells] + tail[0]);
  }
};

const BumpTables& bump_tables() {
  static const BumpTables tables;
  return tables;
}

double double_factorial_odd(int n) {  // (n)!! for odd n, 1 for n <= 0
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

}  // namespace

// ---------------------------------------------------------------- SmoothBump

double SmoothBump::normalization() { return bump_tables().total; }

double SmoothBump::head_integral(double r) {
  const auto& t = bump_tables();
  const double pos = (r - 1.0) * BumpTables::kCells;
  const int j = std::clamp(static_cast<int>(std::floor(pos)), 0, BumpTables::kCells - 1);
  const double rj = 1.0 + static_cast<double>(j) / BumpTables::kCells;
  return t.head[j] + (r > rj ? gk_real(rj, r) : 0.0);
}

double SmoothBump::tail_integral(double r) {
  const auto& t = bump_tables();
  const double pos = (r - 1.0) * BumpTables::kCells;
  const int j = std::clamp(static_cast<int>(std::floor(pos)), 0, BumpTables::kCells - 1);
  const double rj1 = 1.0 + static_cast<double>(j + 1) / BumpTables::kCells;
  return t.tail[j + 1] + (rj1 > r ? gk_real(r, rj1) : 0.0);
}

double SmoothBump::value(double x) {
  const double r = std::abs(x);
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  if (r < 1.5) return 1.0 - head_integral(r) / normalization();
  return tail_integral(r) / normalization();
}

double SmoothBump::minus_one(double x) {
  const double r = std::abs(x);
  if (r <= 1.0) return 0.0;
  if (r >= 2.0) return -1.0;
  if (r < 1.5) return -head_integral(r) / normalization();
  return tail_integral(r) / normalization() - 1.0;
}

double SmoothBump::derivative(double x, int k) {
  if (k == 0) return value(x);
  const double r = std::abs(x);
  if (r <= 1.0 || r >= 2.0) return 0.0;
  const double d = -bump_density_derivatives(r, k - 1)[k - 1] / normalization();
  return (x < 0.0 && k % 2 == 1) ? -d : d;
}

// --------------------------------------------------------------- KernelTable

KernelTable::KernelTable(double spacing, std::size_t count, int max_order,
                         std::vector<double> values)
    : h_(spacing), count_(count), max_order_(max_order), values_(std::move(values)) {
  if (!(h_ > 0.0) || count_ < 16 || max_order_ < 0 ||
      values_.size() != count_ * static_cast<std::size_t>(max_order_ + 1))
    throw Error("KernelTable: inconsistent dimensions");
}

double KernelTable::reach() const { return h_ * static_cast<double>(count_ - 7); }

bool KernelTable::covers(double x, int order) const {
  return order >= 0 && order <= max_order_ && std::abs(x) <= reach();
}

double KernelTable::interpolate(double x, int order) const {
  const double ax = std::abs(x);
  const double parity = (x < 0.0 && order % 2 == 1) ? -1.0 : 1.0;
  const double* row = values_.data() + static_cast<std::size_t>(order) * count_;
  const double sign_odd = (order % 2 == 1) ? -1.0 : 1.0;
  auto node = [&](long j) { return j >= 0 ? row[j] : sign_odd * row[-j]; };
  const double pos = ax / h_;
  const long j0 = static_cast<long>(std::floor(pos));
  constexpr int kLeft = 5;
  constexpr int kPoints = 12;
  const double t = pos - static_cast<double>(j0);
  if (t == 0.0) return parity * node(j0);
  double acc = 0.0;
  for (int a = 0; a < kPoints; ++a) {
    const double ta = a - kLeft;
    double w = 1.0;
    for (int b = 0; b < kPoints; ++b) {
      if (b == a) continue;
      const double tb = b - kLeft;
      w *= (t - tb) / (ta - tb);
    }
    acc += w * node(j0 + a - kLeft);
  }
  return parity * acc;
}

void KernelTable::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("KernelTable: cannot open " + path.string() + " for writing");
  os.write("VWSKTAB1", 8);
  binary::write_le<std::uint32_t>(os, 1);
  binary::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(max_order_));
  binary::write_le<double>(os, h_);
  binary::write_le<std::uint64_t>(os, count_);
  for (double v : values_) binary::write_le<double>(os, v);
  if (!os) throw Error("KernelTable: write failed for " + path.string());
}

KernelTable KernelTable::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("KernelTable: cannot open " + path.string());
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, "VWSKTAB1", 8) != 0)
    throw Error("KernelTable: bad magic in " + path.string());
  const auto version = binary::read_le<std::uint32_t>(is);
  if (version != 1) throw Error("KernelTable: unsupported format version");
  const auto max_order = static_cast<int>(binary::read_le<std::uint32_t>(is));
  const double h = binary::read_le<double>(is);
  const auto count = binary::read_le<std::uint64_t>(is);
  std::vector<double> values(count * static_cast<std::size_t>(max_order + 1));
  for (double& v : values) v = binary::read_le<double>(is);
  return KernelTable(h, count, max_order, std::move(values));
}

// ----------------------------------------------------------- MollifierKernel

MollifierKernel MollifierKernel::gaussian() { return MollifierKernel(Kind::gaussian); }
MollifierKernel MollifierKernel::flat() { return MollifierKernel(Kind::flat); }

std::string MollifierKernel::name() const { return kind_ == Kind::gaussian ? "gaussian" : "flat"; }

double MollifierKernel::value(double x, int order) const {
  if (table_ && table_->covers(x, order)) return table_->interpolate(x, order);
  return value_direct(x, order);
}

double MollifierKernel::value_direct(double x, int order) const {
  if (order < 0 || order > kMaxOrder)
    throw DerivativeOrderError("kernel derivative order " + std::to_string(order) +
                               " exceeds " + std::to_string(kMaxOrder));
  if (kind_ == Kind::gaussian) {
    const double sign = (order % 2 == 0) ? 1.0 : -1.0;
    return sign * hermite(x, order)[order] * std::exp(-x * x) / std::sqrt(kPi);
  }
  // psi^{(k)}(x) = (1/pi) int_0^2 xi^k cos(x xi + k pi/2) B(xi) dxi
  const double phase = order * kPi / 2.0;
  auto f = [&](double xi) {
    return cplx(std::pow(xi, order) * std::cos(x * xi + phase) * SmoothBump::value(xi));
  };
  const double width = std::min(0.25, kPi / std::max(std::abs(x), 1.0));
  auto bp = uniform_panels(0.0, 1.0, width);
  auto bp2 = uniform_panels(1.0, 2.0, width);
  bp.insert(bp.end(), bp2.begin() + 1, bp2.end());
  const double tol = 1e-13 * std::ldexp(1.0, order);
  auto r = integrate(f, std::span<const double>(bp), {tol, 0.0, 50000});
  if (!r.converged && r.error_estimate > 1e3 * tol)
    throw QuadratureError("flat kernel quadrature did not converge", r.error_estimate);
  return r.value.real() / kPi;
}

double MollifierKernel::fourier(double xi) const {
  if (kind_ == Kind::gaussian) return std::exp(-0.25 * xi * xi);
  return SmoothBump::value(xi);
}

double MollifierKernel::fourier_minus_one(double xi) const {
  if (kind_ == Kind::gaussian) return std::expm1(-0.25 * xi * xi);
  return SmoothBump::minus_one(xi);
}

double MollifierKernel::cdf(double z) const {
  if (kind_ == Kind::gaussian) return 0.5 * std::erfc(-z);
  // 1/2 + (1/pi) int_0^2 B(xi) sin(z xi)/xi dxi
  auto f = [&](double xi) {
    const double arg = z * xi;
    const double sinc = std::abs(arg) < 1e-8 ? z : std::sin(arg) / xi;
    return cplx(sinc * SmoothBump::value(xi));
  };
  const double width = std::min(0.25, kPi / std::max(std::abs(z), 1.0));
  auto bp = uniform_panels(0.0, 1.0, width);
  auto bp2 = uniform_panels(1.0, 2.0, width);
  bp.insert(bp.end(), bp2.begin() + 1, bp2.end());
  auto r = integrate(f, std::span<const double>(bp), {1e-13, 0.0, 50000});
  if (!r.converged && r.error_estimate > 1e-10)
    throw QuadratureError("flat kernel cdf quadrature did not converge", r.error_estimate);
  return 0.5 + r.value.real() / kPi;
}

double MollifierKernel::moment(int j) const {
  if (j == 0) return 1.0;
  if (kind_ == Kind::flat || j % 2 == 1) return 0.0;
  return double_factorial_odd(j - 1) / std::pow(2.0, j / 2);
}

double MollifierKernel::spectral_radius() const {
  return kind_ == Kind::gaussian ? std::numeric_limits<double>::infinity() : 2.0;
}

double MollifierKernel::spectral_extent() const {
  return kind_ == Kind::gaussian ? std::sqrt(160.0) : 2.0;
}

KernelTable MollifierKernel::build_table(double spacing, double reach, int max_order) const {
  const auto count = static_cast<std::size_t>(std::ceil(reach / spacing)) + 8;
  std::vector<double> values(count * static_cast<std::size_t>(max_order + 1));
  for (int k = 0; k <= max_order; ++k)
    for (std::size_t j = 0; j < count; ++j)
      values[static_cast<std::size_t>(k) * count + j] = value_direct(spacing * j, k);
  return KernelTable(spacing, count, max_order, std::move(values));
}

MollifierKernel MollifierKernel::with_table(std::shared_ptr<const KernelTable> table) const {
  MollifierKernel out = *this;
  out.table_ = std::move(table);
  return out;
}

// -------------------------------------------------------------------- Cutoff

double Cutoff::value(double x, int order) const {
  if (kind_ == Kind::gaussian) {
    const double sign = (order % 2 == 0) ? 1.0 : -1.0;
    return sign * hermite(x, order)[order] * std::exp(-x * x);
  }
  return SmoothBump::derivative(x, order);
}

double Cutoff::minus_one(double x) const {
  if (kind_ == Kind::gaussian) return std::expm1(-x * x);
  return SmoothBump::minus_one(x);
}

}  // namespace vwslab
