#pragma once

// Discrete quantization p(x, D) of separable symbols, the weight conjugation
// S_s = <x>^s S <x>^{-s} (n = 1), and refinement-checked probes of the
// boundedness, composition and Garding theorems.

#include <string>
#include <vector>

#include "vwslab/dist_catalog.hpp"
#include "vwslab/grid_field.hpp"
#include "vwslab/pde_solver.hpp"
#include "vwslab/smooth_function.hpp"

namespace vwslab {

/// p(x, xi) = sum_j a_j(x) mu_j(xi), with exact derivatives of both factors.
class SymbolSpec {
 public:
  struct Term {
    SmoothFunction a;   // x-factor
    SmoothFunction mu;  // xi-factor
    bool a_constant = false;
    bool mu_constant = false;
  };

  SymbolSpec() = default;
  /// mu(xi) alone, of order m.
  static SymbolSpec multiplier(SmoothFunction mu, double order, std::string label);
  /// a(x) alone (order 0).
  static SymbolSpec multiplication(SmoothFunction a, std::string label);
  static SymbolSpec separable(SmoothFunction a, SmoothFunction mu, double order, std::string label);
  static SymbolSpec from_terms(std::vector<Term> terms, double order, std::string label);

  /// <xi>^m
  static SymbolSpec japanese(double m);
  /// xi^k
  static SymbolSpec xi_power(int k);

  SymbolSpec operator+(const SymbolSpec& o) const;

  cplx operator()(double x, double xi) const { return derivative(x, xi, 0, 0); }
  /// d_xi^alpha d_x^beta p
  cplx derivative(double x, double xi, int alpha, int beta) const;

  bool is_zero() const { return terms_.empty(); }
  bool x_independent() const;
  bool xi_independent() const;
  double order() const { return order_; }
  const std::string& label() const { return label_; }
  const std::vector<Term>& terms() const { return terms_; }

  /// |p|^{(m)}_l = max_{alpha + beta <= l} sup |d_xi^alpha d_x^beta p| <xi>^{-(m - alpha)}
  /// over the grid nodes and dual frequencies; one entry per l = 0..max_l.
  std::vector<double> seminorms(const Grid& grid, int max_l) const;

 private:
  std::vector<Term> terms_;
  double order_ = 0.0;
  std::string label_;
};

/// x -> f^{(n)}(x).
SmoothFunction differentiate(const SmoothFunction& f, int n);
/// xi -> |xi| (derivatives taken away from 0).
SmoothFunction abs_function();

/// p(x, D) u with the O(N^2) direct sum; the Nyquist bin is dropped.
Field quantize_direct(const SymbolSpec& p, const Field& u);
/// Uses the multiplier/multiplication fast paths when they apply.
Field quantize(const SymbolSpec& p, const Field& u);

/// sum_{alpha < N} (1/alpha!) d_xi^alpha p1 D_x^alpha p2
SymbolSpec composition_symbol(const SymbolSpec& p1, const SymbolSpec& p2, int N);

/// Coefficients of <x>^s S <x>^{-s}:
///   c1' = c1 + 2 i s x / <x>^2
///   c0' = c0 + i s (x / <x>^2) c1 - s (s + 2) x^2 / <x>^4 + s / <x>^2
CoefficientSet conjugated_coefficients(const CoefficientSet& c, int s);

/// The spatial operator P(t) = D^2 + c1 D + c0 applied to u (no dealiasing).
Field spatial_operator(const CoefficientSet& c, double t, const Field& u);

/// || S_s(<x>^s v) - <x>^s S v ||_{L^2} / || <x>^s S v ||_{L^2} at time t.
double conjugation_identity_error(const CoefficientSet& c, int s, const Field& v, double t);

struct ProbeResult {
  std::string probe;
  std::string symbol;
  double coarse = 0.0;
  double fine = 0.0;
  double relative_change = 0.0;
  bool refinement_stable = false;
  std::string family_version = kTestFamilyVersion;
};

struct ProbeGrids {
  Grid coarse{20.0, 256};
  Grid fine{20.0, 512};
};

/// max over the family of || op(p1) op(p2) u - op(q_N) u || / ||u|| on one grid.
double composition_residual(const SymbolSpec& p1, const SymbolSpec& p2, int N, const Grid& grid);
/// max over the family of ||p(x,D) u||_{H^s} / ||u||_{H^{s+m}} on one grid.
double cv_ratio(const SymbolSpec& p, double s, const Grid& grid);
/// min over the family of Re <p(x,D) u, u> / ||u||^2 on one grid.
double garding_ratio(const SymbolSpec& p, const Grid& grid);

/// Refinement tolerance for probe stability (relative change N -> 2N).
inline constexpr double kRefinementTolerance = 0.05;

ProbeResult cv_bound_probe(const SymbolSpec& p, double s, const ProbeGrids& grids = {});
ProbeResult garding_probe(const SymbolSpec& p, const ProbeGrids& grids = {});
ProbeResult composition_probe(const SymbolSpec& p1, const SymbolSpec& p2, int N, const ProbeGrids& grids = {});

}  // namespace vwslab
