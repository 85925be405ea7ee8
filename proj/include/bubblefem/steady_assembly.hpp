#pragma once

#include <array>
#include <string>
#include <vector>

#include "bubblefem/bubble_enrichment.hpp"
#include "bubblefem/execution.hpp"
#include "bubblefem/polynomial.hpp"
#include "bubblefem/problem_model.hpp"
#include "bubblefem/quadrature.hpp"
#include "bubblefem/tridiagonal.hpp"

namespace bubblefem {

/// Enriched element shape functions on [0, l] (Bubnov-Galerkin: the weights are
/// the same functions). For the quadratic bubble
///   N_I  = (l - x)/l + (A - B) x (l - x)
///   N_II = x/l       + (A + B) x (l - x)
struct ShapeFunctions {
  double length = 0.0;
  EnrichmentKind enrichment = EnrichmentKind::linear();
  BubbleBasis bubble;  ///< empty coefficient vectors for linear elements
  ElementPolynomial n_left;
  ElementPolynomial n_right;
  ElementPolynomial dn_left;
  ElementPolynomial dn_right;

  double a_coef() const noexcept;
  double b_coef() const noexcept;

  /// Evaluated in the factored form (l - x)/l + sum_k c_k x^k (l - x), which is
  /// exactly 1 or 0 at the element ends.
  double left(double x) const noexcept;
  double right(double x) const noexcept;
};

/// Bubble coefficients from ls_bubble_basis (A, B for the quadratic case).
/// Propagates DegenerateOperatorError.
ShapeFunctions shape_functions(const TransportCoefficients& coeffs, double l, EnrichmentKind enrichment);

/// Quadratic-bubble shape functions for given A and B.
ShapeFunctions shape_functions_ab(double l, double a_coef, double b_coef);

ShapeFunctions shape_functions_from_basis(double l, EnrichmentKind enrichment, BubbleBasis basis);

/// entries[i][j] = integral of -eps N_i' N_j' + kappa N_i N_j' + lambda N_i N_j
/// (row i = weight, column j = trial). Boundary flux terms are applied during
/// global assembly, so rhs_flux stays zero at element level.
struct ElementStiffness {
  std::array<std::array<double, 2>, 2> entries{};
  std::array<double, 2> rhs_flux{};
};

/// Runtime path. Requires n_quad >= order + 1 so that the integrals are exact.
ElementStiffness element_stiffness_quadrature(const TransportCoefficients& coeffs,
                                              const ShapeFunctions& shapes, int n_quad);
ElementStiffness element_stiffness_quadrature(const TransportCoefficients& coeffs,
                                              const ShapeFunctions& shapes, const QuadratureRule& rule);

/// Closed-form E, F, G, H for the quadratic bubble with coefficients A, B.
ElementStiffness element_stiffness_closed(const TransportCoefficients& coeffs, double l, double a_coef,
                                          double b_coef);

/// n = 4 for quadratic, 5 for cubic, order + 2 in general (3 for linear).
int default_quadrature_points(EnrichmentKind enrichment);
int minimum_quadrature_points(EnrichmentKind enrichment);

struct SteadyOptions {
  int quad_points = 0;  ///< 0 selects default_quadrature_points
  Execution execution = Execution::parallel;
};

/// Global system restricted to the free (non-Dirichlet) nodes
/// first_free .. first_free + system.size() - 1.
struct SteadyAssembly {
  TridiagonalSystem system;
  std::size_t first_free = 0;
  std::vector<double> dirichlet_values;  ///< full nodal vector with Dirichlet entries set
  std::vector<ShapeFunctions> shapes;    ///< per element
  std::vector<std::string> warnings;
};

/// Sums the element blocks, adds Neumann fluxes (+eps*g on the left row,
/// -eps*g on the right row) and eliminates Dirichlet rows and columns.
/// Elements whose bubble is degenerate fall back to linear shapes with a warning.
SteadyAssembly assemble_steady(const SteadyProblem& problem, const Mesh1D& mesh, EnrichmentKind enrichment,
                               const SteadyOptions& options = {});

/// Nodal solve plus reconstruction of the per-element bubble coefficients.
SolutionField solve_steady(const SteadyProblem& problem, const Mesh1D& mesh, EnrichmentKind enrichment,
                           const SteadyOptions& options = {}, std::vector<std::string>* warnings = nullptr);

}  // namespace bubblefem
