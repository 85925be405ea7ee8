#pragma once

#include <span>
#include <vector>

#include "bubblefem/polynomial.hpp"
#include "bubblefem/problem_model.hpp"

namespace bubblefem {

/// Least-squares bubble of order p on [0, l]: coeffs[k-1] multiplies x^k (l - x),
/// k = 1..p-1. For p = 2 the single entry is the quadratic coefficient c; for
/// p = 3 the entries are (c, f) of  c x(l-x) + f x^2(l-x).
struct BubbleSolution {
  int order = 2;
  std::vector<double> coeffs;
  /// Integral of the squared residual at these coefficients.
  double residual_value = 0.0;
};

/// Quadratic bubble written in terms of the nodal values:
///   c = (A - B) u0 + (A + B) ul.
/// A collects the symmetric (diffusion/reaction) part, B the convective part.
struct EnrichmentAB {
  double a_coef = 0.0;
  double b_coef = 0.0;
  double length = 0.0;

  double coefficient(double u0, double ul) const noexcept {
    return (a_coef - b_coef) * u0 + (a_coef + b_coef) * ul;
  }
};

/// Bubble coefficients induced by unit nodal values, i.e. the enrichment
/// carried by the left and right shape functions:
///   N_I  = (l - x)/l + sum_k from_left[k-1]  x^k (l - x)
///   N_II = x/l       + sum_k from_right[k-1] x^k (l - x)
/// The bubble for nodal data (u0, ul) is u0*from_left + ul*from_right.
struct BubbleBasis {
  int order = 2;
  std::vector<double> from_left;
  std::vector<double> from_right;
};

/// epsilon p'' + kappa p' + lambda p.
ElementPolynomial apply_operator(const TransportCoefficients& coeffs, const ElementPolynomial& poly);

/// Residual R_B of the enriched trial u0 (l-x)/l + ul x/l + bubble on [0, l].
ElementPolynomial residual_polynomial(const TransportCoefficients& coeffs, double l, double u0,
                                      double ul, std::span<const double> bubble_coeffs);

/// J_B = integral over [0, l] of R_B^2, integrated exactly. Throws ArgumentError for l <= 0.
double residual_functional(const TransportCoefficients& coeffs, double l, double u0, double ul,
                           std::span<const double> bubble_coeffs);
double residual_functional(const TransportCoefficients& coeffs, double l, double u0, double ul,
                           const BubbleSolution& bubble);

/// Minimiser of J_B over span{x^k (l - x)} from the normal equations
///   sum_k (L b_i, L b_k) c_k = -(L u_lin, L b_i).
/// This is the reference source for every bubble coefficient in the library.
/// Throws DegenerateOperatorError when the (diagonally scaled) Gram matrix has a
/// Cholesky pivot below 1e-12.
BubbleSolution ls_bubble(const TransportCoefficients& coeffs, double l, double u0, double ul,
                         int order);

/// Both unit-data solutions of ls_bubble from a single Gram factorisation.
BubbleBasis ls_bubble_basis(const TransportCoefficients& coeffs, double l, int order);

// Closed forms. They are cross-checks of ls_bubble, not alternative solvers.

/// Quadratic coefficient c for nodal data (u0, ul), closed form.
double quadratic_coefficient(const TransportCoefficients& coeffs, double l, double u0, double ul);

/// A and B of the quadratic bubble. Throws DegenerateOperatorError when the
/// common denominator is below 1e-12 times its largest term.
EnrichmentAB quadratic_ab(const TransportCoefficients& coeffs, double l);

/// Quadratic coefficient of u_t + epsilon u_xx + u = 0 for unit nodal sum:
///   c = -(5/2) (l^2 - 12 eps) / (l^4 - 20 eps l^2 + 120 eps^2).
double transient_coefficient(double epsilon, double l);

/// Factor F(l) with c = F(l) (u0 + ul) for -u''/100 + u = 0:
///   F = -25 (25 l^2 + 3) / (250 l^4 + 50 l^2 + 3).
double reaction_diffusion_benchmark_factor(double l);

/// Published closed-form expressions for the cubic pair (c, f). Their algebra
/// does not reproduce the minimiser in general; used only for reporting.
struct CubicClosedForm {
  double c = 0.0;
  double f = 0.0;
};
CubicClosedForm cubic_closed_form(const TransportCoefficients& coeffs, double l, double u0, double ul);

struct CubicCrossCheck {
  CubicClosedForm closed;
  double c_relative_deviation = 0.0;
  double f_relative_deviation = 0.0;
  /// Either deviation above 1e-8.
  bool mismatch = false;
};

/// Cubic pair from the 2x2 normal equations. When `check` is non-null it is
/// filled with the published closed forms and their deviation from the result.
BubbleSolution cubic_coefficients(const TransportCoefficients& coeffs, double l, double u0,
                                  double ul, CubicCrossCheck* check = nullptr);

// Two-dimensional rectangular element [0, l] x [0, h] for u_y = u_xx.

struct RectCorners {
  double u00 = 0.0;  ///< u(0, 0)
  double u0h = 0.0;  ///< u(0, h)
  double ul0 = 0.0;  ///< u(l, 0)
  double ulh = 0.0;  ///< u(l, h)
};

/// c = 15 (u00 - u0h + ul0 - ulh) / (h (l^4 + 12 h^2)).
double bubble_2d_coefficient(double l, double h, double u00, double u0h, double ul0, double ulh);

/// Integral of (u_xx - u_y)^2 for the bilinear trial plus c x y (l-x)(h-y),
/// by tensor Gauss quadrature exact for the integrand.
double residual_functional_2d(double l, double h, const RectCorners& corners, double c);

}  // namespace bubblefem
