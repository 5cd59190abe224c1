#pragma once

// Mollifier building blocks: the cutoff phi (phi(0) = 1) and the kernel psi
// (integral 1). Two families are provided:
//   gaussian: phi = exp(-x^2), psi = exp(-x^2)/sqrt(pi), psi^(xi) = exp(-xi^2/4)
//   flat:     phi = B, psi^ = B, with B a C-infinity bump equal to 1 on
//             [-1, 1] and supported in [-2, 2]; psi has all moments >= 1
//             equal to zero and phi is flat to infinite order at 0.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace vwslab {

/// The bump B: 1 on [-1,1], 0 outside (-2,2), smooth transition
/// B(r) = 1 - int_1^r b / int_1^2 b with b(s) = exp(-1/(s-1) - 1/(2-s)).
class SmoothBump {
 public:
  static double value(double x);
  /// B(x) - 1 without cancellation.
  static double minus_one(double x);
  /// B^{(k)}(x), exact closed-form recursion for k >= 1.
  static double derivative(double x, int k);
  /// int_1^2 b.
  static double normalization();

 private:
  static double tail_integral(double r);   // int_r^2 b
  static double head_integral(double r);   // int_1^r b
};

/// Tabulated psi^{(k)} on x_j = j h (j = 0..count-1), used to accelerate the
/// flat kernel. Interpolation is 12-point Lagrange; parity handles x < 0.
class KernelTable {
 public:
  KernelTable(double spacing, std::size_t count, int max_order, std::vector<double> values);

  double spacing() const { return h_; }
  std::size_t count() const { return count_; }
  int max_order() const { return max_order_; }
  double reach() const;  // largest |x| served by interpolation
  bool covers(double x, int order) const;
  double interpolate(double x, int order) const;
  const std::vector<double>& values() const { return values_; }

  /// Binary layout (little-endian): magic "VWSKTAB1", u32 format version,
  /// u32 max_order, f64 spacing, u64 count, then (max_order+1)*count f64
  /// values ordered by derivative order, then node.
  void save(const std::filesystem::path& path) const;
  static KernelTable load(const std::filesystem::path& path);

 private:
  double h_;
  std::size_t count_;
  int max_order_;
  std::vector<double> values_;
};

/// Convolution kernel psi with closed-form or quadrature evaluation.
class MollifierKernel {
 public:
  enum class Kind { gaussian, flat };
  static constexpr int kMaxOrder = 16;

  static MollifierKernel gaussian();
  static MollifierKernel flat();

  Kind kind() const { return kind_; }
  std::string name() const;

  /// psi^{(order)}(x); order <= kMaxOrder.
  double value(double x, int order = 0) const;
  /// psi^{(order)}(x) by direct evaluation, bypassing any attached table.
  double value_direct(double x, int order = 0) const;
  /// Fourier transform int psi(x) e^{-i x xi} dx (real and even).
  double fourier(double xi) const;
  /// fourier(xi) - 1 without cancellation.
  double fourier_minus_one(double xi) const;
  /// int_{-inf}^z psi.
  double cdf(double z) const;
  /// int x^j psi(x) dx.
  double moment(int j) const;
  /// Radius of supp psi^ (infinity for the gaussian).
  double spectral_radius() const;
  /// |xi| beyond which |psi^(xi)| < exp(-40).
  double spectral_extent() const;

  /// Builds and attaches a table for |x| <= reach (flat kernel only).
  KernelTable build_table(double spacing, double reach, int max_order) const;
  MollifierKernel with_table(std::shared_ptr<const KernelTable> table) const;
  bool has_table() const { return table_ != nullptr; }

 private:
  explicit MollifierKernel(Kind k) : kind_(k) {}
  Kind kind_;
  std::shared_ptr<const KernelTable> table_;
};

/// Cutoff phi with phi(0) = 1.
class Cutoff {
 public:
  enum class Kind { gaussian, flat };
  static Cutoff gaussian() { return Cutoff(Kind::gaussian); }
  static Cutoff flat() { return Cutoff(Kind::flat); }

  Kind kind() const { return kind_; }
  double value(double x, int order = 0) const;
  /// phi(x) - 1 without cancellation.
  double minus_one(double x) const;

 private:
  explicit Cutoff(Kind k) : kind_(k) {}
  Kind kind_;
};

}  // namespace vwslab
