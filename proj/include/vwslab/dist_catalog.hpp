#pragma once

// Closed catalog of tempered distributions on the line, exact pairings with
// closed-form test functions, and convolution with mollifier kernels.

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vwslab/grid_field.hpp"
#include "vwslab/kernels.hpp"
#include "vwslab/quadrature.hpp"
#include "vwslab/smooth_function.hpp"

namespace vwslab {

/// Largest derivative order handed out by catalog smooth functions.
inline constexpr int kCatalogMaxOrder = 16;
/// Default largest delta derivative order accepted by the catalog.
inline constexpr int kDefaultMaxDistributionOrder = 8;

/// h(x) = P(x - c) exp(-a (x - c)^2 + i kappa x), a > 0.
class TestFunction {
 public:
  TestFunction() = default;  // the zero function
  TestFunction(std::vector<cplx> poly, double center, double a, double kappa, std::string label = {});

  static TestFunction gaussian(double center = 0.0, double width = 1.0);

  cplx operator()(double x, int order = 0) const;
  /// Values of h^{(0..n)} at x.
  std::vector<cplx> derivatives(double x, int n) const;
  /// Fourier transform int h(x) e^{-i x xi} dx, closed form.
  cplx fourier(double xi) const;
  /// |xi - kappa| beyond which |fourier| is below exp(-700) of its scale.
  double spectral_reach() const;

  /// Half-width around center() outside which |h| < 1e-17 * max|h|.
  double support_radius() const;
  /// sup over a probe grid of <x>^M |h^{(beta)}| for M, beta <= order.
  double seminorm(int order) const;

  SmoothFunction handle() const;
  Field sample(const Grid& grid) const;

  bool is_zero() const { return poly_.empty(); }
  double center() const { return c_; }
  double a() const { return a_; }
  double kappa() const { return kappa_; }
  const std::vector<cplx>& poly() const { return poly_; }
  const std::string& label() const { return label_; }

 private:
  std::vector<cplx> poly_;
  double c_ = 0.0;
  double a_ = 1.0;
  double kappa_ = 0.0;
  std::string label_;
};

inline constexpr const char* kTestFamilyVersion = "tf-v1";
/// The versioned 10-member test family.
std::vector<TestFunction> test_function_family();

struct DiracDelta {
  double center = 0.0;
  int order = 0;
};
struct Heaviside {
  double center = 0.0;
};
struct Polynomial {
  std::vector<cplx> coefficients;  // sum_j c_j x^j
};

enum class SmoothKind { gaussian, sech, sine_pack, lorentzian, lorentzian_odd };
std::string to_string(SmoothKind k);
SmoothKind smooth_kind_from_string(const std::string& name);

/// Bounded smooth catalog member with y = (x - center) / width:
///   gaussian       exp(-y^2)
///   sech           sech(y)
///   lorentzian     1 / (1 + y^2)
///   lorentzian_odd y / (1 + y^2)
///   sine_pack      sin(k (x - center)) exp(-((x - center) / width)^2)
struct CatalogSmooth {
  SmoothKind kind = SmoothKind::gaussian;
  double center = 0.0;
  double width = 1.0;
  double wavenumber = 0.0;

  cplx operator()(double x, int order = 0) const;
  /// Transform of the member translated to the origin (center = 0).
  cplx fourier_centered(double xi) const;
  /// |xi| beyond which |fourier_centered| < exp(-45) * its peak.
  double spectral_reach() const;
  SmoothFunction handle() const;
};

class DistributionExpr;
struct ScaledNode {
  cplx scalar;
  std::shared_ptr<const DistributionExpr> inner;
};
struct SumNode {
  std::vector<DistributionExpr> terms;
};

class DistributionExpr {
 public:
  using Node = std::variant<DiracDelta, Heaviside, Polynomial, CatalogSmooth, ScaledNode, SumNode>;

  /// The zero distribution (empty polynomial).
  DistributionExpr();

  static DistributionExpr delta(double center = 0.0, int order = 0);
  static DistributionExpr heaviside(double center = 0.0);
  static DistributionExpr polynomial(std::vector<cplx> coefficients);
  static DistributionExpr constant(cplx value);
  static DistributionExpr smooth(SmoothKind kind, double center = 0.0, double width = 1.0,
                                 double wavenumber = 0.0);
  /// Throws DomainError for a zero scalar.
  static DistributionExpr scaled(cplx scalar, DistributionExpr inner);
  /// Throws DomainError for fewer than two terms.
  static DistributionExpr sum(std::vector<DistributionExpr> terms);

  const Node& node() const { return *node_; }

  /// Order N: delta^{(k)} -> k, polynomial of degree d -> d, others 0.
  int order() const;
  /// True when a delta occurs anywhere in the expression.
  bool is_singular() const;
  bool is_zero() const;
  /// Largest delta derivative order occurring (0 if none).
  int max_delta_order() const;
  /// Points where the expression is singular or discontinuous.
  std::vector<double> centers() const;
  /// Pointwise value of a locally integrable expression, H(center) = 1/2.
  /// Throws SingularSampleError for deltas.
  cplx point_value(double x) const;

  std::string describe() const;

 private:
  explicit DistributionExpr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
  std::shared_ptr<const Node> node_;
};

DistributionExpr operator+(const DistributionExpr& a, const DistributionExpr& b);
DistributionExpr operator*(cplx s, const DistributionExpr& u);

/// <u, h> by the exact rule of each variant.
cplx pair(const DistributionExpr& u, const TestFunction& h, const QuadratureOptions& opt = {});
/// <u, h> against a sampled test function; h must decay at the grid boundary.
cplx pair_sampled(const DistributionExpr& u, const Field& h, double decay_threshold = 1e-8);
/// int v h dx for a smooth v, with extra breakpoints where v varies quickly.
cplx pair_smooth(const SmoothFunction& v, const TestFunction& h, std::span<const double> extra_breakpoints,
                 double resolution, const QuadratureOptions& opt = {});

/// x -> (psi_eps * u)(x) with derivatives up to the kernel limits.
SmoothFunction convolve_mollifier(const DistributionExpr& u, const MollifierKernel& psi, double eps);

/// Samples a locally integrable expression on the grid nodes.
Field sample(const DistributionExpr& u, const Grid& grid);
Field sample(const SmoothFunction& f, const Grid& grid);

/// The expression itself as a smooth function (catalog members, polynomials and
/// their combinations); throws DomainError for deltas and Heaviside functions.
SmoothFunction as_smooth_function(const DistributionExpr& u);

}  // namespace vwslab
