#include "vwslab/grid_field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>

#include "vwslab/binary_io.hpp"
#include "vwslab/errors.hpp"

namespace vwslab {

// ---------------------------------------------------------------------- Grid

Grid::Grid(double half_width, std::size_t points) : L_(half_width), n_(points) {
  if (!(L_ > 0.0) || !std::isfinite(L_)) throw DomainError("grid half-width must be positive");
  if (n_ < 16 || (n_ & (n_ - 1)) != 0)
    throw DomainError("grid size must be a power of two >= 16, got " + std::to_string(n_));
}

long Grid::wavenumber(std::size_t k) const {
  const auto n = static_cast<long>(n_);
  const auto kk = static_cast<long>(k);
  return kk < n / 2 ? kk : kk - n;
}

double Grid::xi(std::size_t k) const { return std::numbers::pi / L_ * static_cast<double>(wavenumber(k)); }

double Grid::xi_max() const { return std::numbers::pi / L_ * static_cast<double>(n_ / 2); }

std::vector<double> Grid::nodes() const {
  std::vector<double> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = this->x(i);
  return x;
}

// --------------------------------------------------------------------- Field

Field::Field(Grid grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw DomainError("field size does not match grid");
}

Field::Field(Grid grid) : grid_(grid), values_(grid.size()) {}

Field Field::from_function(const Grid& grid, const std::function<cplx(double)>& f) {
  Field out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) out.values_[i] = f(grid.x(i));
  return out;
}

double Field::boundary_decay() const {
  const double peak = max_abs();
  if (peak == 0.0) return 0.0;
  const std::size_t band = std::max<std::size_t>(1, size() / 20);
  double edge = 0.0;
  for (std::size_t i = 0; i < band; ++i)
    edge = std::max({edge, std::abs(values_[i]), std::abs(values_[size() - 1 - i])});
  return edge / peak;
}

double Field::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Field::l2_norm() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return std::sqrt(s * grid_.spacing());
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

Field& Field::operator+=(const Field& o) { return axpy(1.0, o); }
Field& Field::operator-=(const Field& o) { return axpy(-1.0, o); }

Field& Field::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  return *this;
}

Field& Field::axpy(cplx s, const Field& o) {
  if (!(grid_ == o.grid_)) throw DomainError("fields live on different grids");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * o.values_[i];
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cplx s, Field a) { return a *= s; }

cplx inner(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw DomainError("fields live on different grids");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s * a.grid().spacing();
}

// ----------------------------------------------------------------------- FFT

namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

const PlanPair& plans_for(std::size_t n) {
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> a(n), b(n);
  auto* in = reinterpret_cast<fftw_complex*>(a.data());
  auto* out = reinterpret_cast<fftw_complex*>(b.data());
  const int ni = static_cast<int>(n);
  PlanPair p{fftw_plan_dft_1d(ni, in, out, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED),
             fftw_plan_dft_1d(ni, in, out, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED)};
  if (!p.forward || !p.backward) throw Error("FFTW planning failed for n = " + std::to_string(n));
  return cache.emplace(n, p).first->second;
}

void run(fftw_plan plan, const cplx* in, cplx* out) {
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

void fft_forward(const cplx* in, cplx* out, std::size_t n) {
  if (in == out) {
    std::vector<cplx> tmp(in, in + n);
    run(plans_for(n).forward, tmp.data(), out);
  } else {
    run(plans_for(n).forward, in, out);
  }
}

void fft_backward(const cplx* in, cplx* out, std::size_t n) {
  if (in == out) {
    std::vector<cplx> tmp(in, in + n);
    run(plans_for(n).backward, tmp.data(), out);
  } else {
    run(plans_for(n).backward, in, out);
  }
}

SpectralField::SpectralField(Grid grid, std::vector<cplx> coefficients)
    : grid_(grid), c_(std::move(coefficients)) {
  if (c_.size() != grid_.size()) throw DomainError("spectral field size does not match grid");
}

double SpectralField::l2_norm() const {
  double s = 0.0;
  for (const auto& v : c_) s += std::norm(v);
  return std::sqrt(s * grid_.spacing());
}

SpectralField fourier(const Field& f) {
  const std::size_t n = f.size();
  std::vector<cplx> out(n);
  fft_forward(f.values().data(), out.data(), n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : out) v *= scale;
  return SpectralField(f.grid(), std::move(out));
}

Field inverse_fourier(const SpectralField& s) {
  const std::size_t n = s.grid().size();
  std::vector<cplx> out(n);
  fft_backward(s.coefficients().data(), out.data(), n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : out) v *= scale;
  return Field(s.grid(), std::move(out));
}

Field apply_multiplier(const Field& f, const std::function<cplx(double)>& m, bool zero_nyquist) {
  auto s = fourier(f);
  auto& c = s.coefficients();
  const auto& g = f.grid();
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= m(g.xi(k));
  if (zero_nyquist) c[c.size() / 2] = 0.0;
  return inverse_fourier(s);
}

Field dealias_truncate(const Field& f) {
  auto s = fourier(f);
  auto& c = s.coefficients();
  const auto cutoff = static_cast<long>(f.size() / 3);
  for (std::size_t k = 0; k < c.size(); ++k)
    if (std::labs(f.grid().wavenumber(k)) > cutoff) c[k] = 0.0;
  return inverse_fourier(s);
}

Field derivative(const Field& f, int order, bool dealias) {
  if (order < 0) throw DomainError("derivative order must be nonnegative");
  if (order == 0 && !dealias) return f;
  auto s = fourier(f);
  auto& c = s.coefficients();
  const auto& g = f.grid();
  const auto cutoff = static_cast<long>(f.size() / 3);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (dealias && std::labs(g.wavenumber(k)) > cutoff) {
      c[k] = 0.0;
      continue;
    }
    c[k] *= std::pow(cplx(0.0, g.xi(k)), order);
  }
  if (order % 2 == 1) c[c.size() / 2] = 0.0;
  return inverse_fourier(s);
}

Field weight_multiply(const Field& f, double s) {
  if (s == 0.0) return f;
  Field out = f;
  const auto& g = f.grid();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = g.x(i);
    out[i] *= std::pow(1.0 + x * x, 0.5 * s);
  }
  return out;
}

Field product(const Field& a, const Field& b, bool dealias) {
  if (!(a.grid() == b.grid())) throw DomainError("fields live on different grids");
  if (!dealias) {
    Field out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
    return out;
  }
  Field ta = dealias_truncate(a);
  const Field tb = dealias_truncate(b);
  for (std::size_t i = 0; i < ta.size(); ++i) ta[i] *= tb[i];
  return dealias_truncate(ta);
}

cplx spectral_evaluate(const Field& f, double x, int order) {
  const auto s = fourier(f);
  const auto& c = s.coefficients();
  const auto& g = f.grid();
  const double shift = x + g.half_width();
  cplx acc = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k == c.size() / 2) continue;
    const double xi = g.xi(k);
    acc += c[k] * std::pow(cplx(0.0, xi), order) * std::polar(1.0, xi * shift);
  }
  return acc / std::sqrt(static_cast<double>(f.size()));
}

// --------------------------------------------------------------------- norms

NormValue weighted_sobolev_norm(const Field& f, double m, double M) {
  NormValue out;
  out.decay_warning = M > 0.0 && f.boundary_decay() > kDecayThreshold;
  Field v = m == 0.0 ? f : apply_multiplier(f, [m](double xi) { return cplx(std::pow(1.0 + xi * xi, 0.5 * m)); });
  out.value = weight_multiply(v, M).l2_norm();
  return out;
}

NormValue schwartz_seminorm(const Field& f, int M, int beta) {
  NormValue out;
  out.decay_warning = M > 0 && f.boundary_decay() > kDecayThreshold;
  const Field d = derivative(f, beta);
  const auto& g = f.grid();
  double best = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double x = g.x(i);
    best = std::max(best, std::pow(1.0 + x * x, 0.5 * M) * std::abs(d[i]));
  }
  out.value = best;
  return out;
}

// ------------------------------------------------------------------------ IO

void write_binary(const Field& f, std::ostream& os) {
  binary::write_le<double>(os, f.grid().half_width());
  binary::write_le<std::uint64_t>(os, f.size());
  for (const auto& v : f.values()) {
    binary::write_le<double>(os, v.real());
    binary::write_le<double>(os, v.imag());
  }
}

Field read_binary(std::istream& is) {
  const double L = binary::read_le<double>(is);
  const auto n = binary::read_le<std::uint64_t>(is);
  Grid g(L, n);
  std::vector<cplx> v(n);
  for (auto& z : v) {
    const double re = binary::read_le<double>(is);
    const double im = binary::read_le<double>(is);
    z = {re, im};
  }
  return Field(g, std::move(v));
}

void save_field(const Field& f, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  write_binary(f, os);
}

Field load_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  return read_binary(is);
}

void write_csv(const Field& f, std::ostream& os) {
  os << "x,re,im,abs\n" << std::setprecision(17);
  for (std::size_t i = 0; i < f.size(); ++i)
    os << f.grid().x(i) << ',' << f[i].real() << ',' << f[i].imag() << ',' << std::abs(f[i]) << '\n';
}

}  // namespace vwslab
