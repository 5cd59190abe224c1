#pragma once

// Uniform periodic grids on [-L, L), complex fields, unitary DFTs, spectral
// derivatives and the weighted norms ||<x>^M <D>^m u||_{L^2}.

#include <complex>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <vector>

namespace vwslab {

using cplx = std::complex<double>;

/// Nodes x_i = -L + 2L i / N, frequencies xi_k = (pi / L) k, k in [-N/2, N/2).
class Grid {
 public:
  Grid(double half_width, std::size_t points);

  double half_width() const { return L_; }
  std::size_t size() const { return n_; }
  double spacing() const { return 2.0 * L_ / static_cast<double>(n_); }
  double x(std::size_t i) const { return -L_ + spacing() * static_cast<double>(i); }
  /// Signed integer frequency index of FFT slot k.
  long wavenumber(std::size_t k) const;
  /// xi of FFT slot k (FFT ordering: 0, 1, ..., N/2-1, -N/2, ..., -1).
  double xi(std::size_t k) const;
  double xi_max() const;
  std::vector<double> nodes() const;

  bool operator==(const Grid& o) const { return L_ == o.L_ && n_ == o.n_; }

 private:
  double L_;
  std::size_t n_;
};

class Field {
 public:
  Field(Grid grid, std::vector<cplx> values);
  explicit Field(Grid grid);  // zeros
  static Field from_function(const Grid& grid, const std::function<cplx(double)>& f);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<cplx>& values() const { return values_; }
  std::vector<cplx>& values() { return values_; }
  cplx operator[](std::size_t i) const { return values_[i]; }
  cplx& operator[](std::size_t i) { return values_[i]; }

  /// max |f| over the outer 5% of nodes (each side) divided by max |f|.
  double boundary_decay() const;
  double max_abs() const;
  /// (sum |f_i|^2 * 2L/N)^{1/2}.
  double l2_norm() const;
  bool all_finite() const;

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(cplx s);
  /// this += s * o
  Field& axpy(cplx s, const Field& o);

 private:
  Grid grid_;
  std::vector<cplx> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cplx s, Field a);
/// sum conj(a_i) b_i * 2L/N
cplx inner(const Field& a, const Field& b);

/// Unitary DFT coefficients in FFT ordering: hat f_k = N^{-1/2} sum_j f_j e^{-2 pi i jk/N}.
class SpectralField {
 public:
  SpectralField(Grid grid, std::vector<cplx> coefficients);
  const Grid& grid() const { return grid_; }
  const std::vector<cplx>& coefficients() const { return c_; }
  std::vector<cplx>& coefficients() { return c_; }
  /// (sum |hat f_k|^2 * 2L/N)^{1/2}, equal to the grid L^2 norm of f.
  double l2_norm() const;

 private:
  Grid grid_;
  std::vector<cplx> c_;
};

SpectralField fourier(const Field& f);
Field inverse_fourier(const SpectralField& s);

/// Raw unnormalized forward/backward FFT (thread-safe plan cache).
void fft_forward(const cplx* in, cplx* out, std::size_t n);
void fft_backward(const cplx* in, cplx* out, std::size_t n);

/// Applies the Fourier multiplier m(xi). The Nyquist mode is zeroed when
/// zero_nyquist is set (needed for odd symbols).
Field apply_multiplier(const Field& f, const std::function<cplx(double)>& m, bool zero_nyquist = false);

/// Spectral d^order/dx^order; dealias zeroes modes with |k| > N/3 first.
Field derivative(const Field& f, int order, bool dealias = false);
/// Pointwise <x>^s f.
Field weight_multiply(const Field& f, double s);
/// Pointwise product, optionally with 2/3-rule truncation of factors and result.
Field product(const Field& a, const Field& b, bool dealias = false);
/// Zeroes all modes with |k| > N/3.
Field dealias_truncate(const Field& f);
/// Trigonometric interpolant (derivative of given order) at an arbitrary x.
cplx spectral_evaluate(const Field& f, double x, int order = 0);

struct NormValue {
  double value = 0.0;
  /// Set when M > 0 and the boundary-decay ratio exceeds 1e-8.
  bool decay_warning = false;
  operator double() const { return value; }
};

inline constexpr double kDecayThreshold = 1e-8;

/// ||<x>^M <D>^m f||_{L^2} with <D> the multiplier (1 + xi^2)^{1/2}.
NormValue weighted_sobolev_norm(const Field& f, double m, double M);
/// max_i <x_i>^M |f^{(beta)}(x_i)|.
NormValue schwartz_seminorm(const Field& f, int M, int beta);

/// Binary layout (little-endian): f64 L, u64 N, then N interleaved (re, im) f64.
void write_binary(const Field& f, std::ostream& os);
Field read_binary(std::istream& is);
void save_field(const Field& f, const std::filesystem::path& path);
Field load_field(const std::filesystem::path& path);
/// CSV with header "x,re,im,abs".
void write_csv(const Field& f, std::ostream& os);

}  // namespace vwslab
