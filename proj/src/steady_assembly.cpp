#include "bubblefem/steady_assembly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bubblefem/errors.hpp"
#include "bubblefem/kernels.hpp"
#include "bubblefem/quadrature.hpp"

namespace bubblefem {

namespace {

ElementPolynomial enriched(ElementPolynomial hat, double l, const std::vector<double>& bubble) {
  for (std::size_t k = 0; k < bubble.size(); ++k)
    hat += bubble[k] * ElementPolynomial::bubble(l, static_cast<int>(k) + 1);
  return hat;
}

double bubble_sum(const std::vector<double>& c, double l, double x) {
  double poly = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) poly = (poly + c[k]) * x;
  return poly * (l - x);
}

void require_covers(const SteadyProblem& problem, const Mesh1D& mesh) {
  const double tol = 1e-12 * std::max({1.0, std::abs(problem.a()), std::abs(problem.b())});
  if (std::abs(mesh.left() - problem.a()) > tol || std::abs(mesh.right() - problem.b()) > tol)
    throw AssemblyError("mesh does not cover the problem domain");
}

}  // namespace

double ShapeFunctions::a_coef() const noexcept {
  if (bubble.from_left.empty()) return 0.0;
  return 0.5 * (bubble.from_left[0] + bubble.from_right[0]);
}

double ShapeFunctions::b_coef() const noexcept {
  if (bubble.from_left.empty()) return 0.0;
  return 0.5 * (bubble.from_right[0] - bubble.from_left[0]);
}

double ShapeFunctions::left(double x) const noexcept {
  return (length - x) / length + bubble_sum(bubble.from_left, length, x);
}

double ShapeFunctions::right(double x) const noexcept {
  return x / length + bubble_sum(bubble.from_right, length, x);
}

ShapeFunctions shape_functions_from_basis(double l, EnrichmentKind enrichment, BubbleBasis basis) {
  if (!(l > 0.0)) throw ArgumentError("element length must be positive");
  const auto n = static_cast<std::size_t>(enrichment.bubble_count());
  if (basis.from_left.size() != n || basis.from_right.size() != n)
    throw ArgumentError("bubble basis does not match enrichment order");
  ShapeFunctions s;
  s.length = l;
  s.enrichment = enrichment;
  s.n_left = enriched(ElementPolynomial({1.0, -1.0 / l}), l, basis.from_left);
  s.n_right = enriched(ElementPolynomial({0.0, 1.0 / l}), l, basis.from_right);
  s.dn_left = s.n_left.derivative();
  s.dn_right = s.n_right.derivative();
  basis.order = enrichment.order();
  s.bubble = std::move(basis);
  return s;
}

ShapeFunctions shape_functions(const TransportCoefficients& coeffs, double l, EnrichmentKind enrichment) {
  if (enrichment.is_linear()) return shape_functions_from_basis(l, enrichment, BubbleBasis{1, {}, {}});
  return shape_functions_from_basis(l, enrichment, ls_bubble_basis(coeffs, l, enrichment.order()));
}

ShapeFunctions shape_functions_ab(double l, double a_coef, double b_coef) {
  return shape_functions_from_basis(l, EnrichmentKind::quadratic_bubble(),
                                    BubbleBasis{2, {a_coef - b_coef}, {a_coef + b_coef}});
}

int default_quadrature_points(EnrichmentKind enrichment) {
  return std::min(enrichment.order() + 2, kMaxGaussPoints);
}

int minimum_quadrature_points(EnrichmentKind enrichment) { return enrichment.order() + 1; }

ElementStiffness element_stiffness_quadrature(const TransportCoefficients& coeffs, const ShapeFunctions& shapes,
                                              const QuadratureRule& rule) {
  const double e = coeffs.epsilon();
  const double k = coeffs.kappa();
  const double r = coeffs.lambda();
  const ElementPolynomial* n[2] = {&shapes.n_left, &shapes.n_right};
  const ElementPolynomial* dn[2] = {&shapes.dn_left, &shapes.dn_right};
  ElementStiffness out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.entries[i][j] = integrate(
          rule,
          [&](double x) {
            const double ni = (*n[i])(x);
            return -e * (*dn[i])(x) * (*dn[j])(x) + k * ni * (*dn[j])(x) + r * ni * (*n[j])(x);
          },
          0.0, shapes.length);
    }
  }
  return out;
}

ElementStiffness element_stiffness_quadrature(const TransportCoefficients& coeffs, const ShapeFunctions& shapes,
                                              int n_quad) {
  if (n_quad < minimum_quadrature_points(shapes.enrichment))
    throw ArgumentError("quadrature with " + std::to_string(n_quad) + " points is not exact for " +
                        shapes.enrichment.name() + " elements");
  return element_stiffness_quadrature(coeffs, shapes, gauss_rule(n_quad));
}

ElementStiffness element_stiffness_closed(const TransportCoefficients& coeffs, double l, double A, double B) {
  const double e = coeffs.epsilon();
  const double k = coeffs.kappa();
  const double r = coeffs.lambda();
  const double l2 = l * l;
  const double l3 = l2 * l;
  const double l4 = l2 * l2;
  const double l6 = l4 * l2;
  const double amb = A - B;
  const double apb = A + B;
  const double prod = A * A - B * B;
  ElementStiffness out;
  out.entries[0][0] =
      (-30.0 * e + 10.0 * r * l2 - 15.0 * k * l + r * l6 * amb * amb + 5.0 * r * l4 * amb - 10.0 * e * l4 * amb * amb) /
      (30.0 * l);
  out.entries[0][1] = (60.0 * e + 10.0 * r * l2 + 30.0 * k * l + 2.0 * r * l6 * prod + 10.0 * r * l4 * A +
                       20.0 * k * l3 * A - 20.0 * e * l4 * prod) /
                      (60.0 * l);
  out.entries[1][0] = (60.0 * e + 10.0 * r * l2 - 30.0 * k * l + 2.0 * r * l6 * prod + 10.0 * r * l4 * A -
                       20.0 * k * l3 * A - 20.0 * e * l4 * prod) /
                      (60.0 * l);
  out.entries[1][1] =
      (-30.0 * e + 10.0 * r * l2 + 15.0 * k * l + r * l6 * apb * apb + 5.0 * r * l4 * apb - 10.0 * e * l4 * apb * apb) /
      (30.0 * l);
  return out;
}

SteadyAssembly assemble_steady(const SteadyProblem& problem, const Mesh1D& mesh, EnrichmentKind enrichment,
                               const SteadyOptions& options) {
  require_covers(problem, mesh);
  if (!problem.left().is_dirichlet() && !problem.right().is_dirichlet())
    throw IllPosedError("no Dirichlet condition: the steady system is singular");
  const int n_quad = options.quad_points > 0 ? options.quad_points : default_quadrature_points(enrichment);
  if (n_quad < minimum_quadrature_points(enrichment))
    throw ArgumentError("quadrature with " + std::to_string(n_quad) + " points is not exact for " +
                        enrichment.name() + " elements (need " +
                        std::to_string(minimum_quadrature_points(enrichment)) + ")");
  const auto& coeffs = problem.coefficients();

  ElementKernelOutput elements = element_kernels(coeffs, mesh, enrichment, n_quad, options.execution);

  SteadyAssembly out;
  for (std::size_t e : elements.fallback_elements)
    out.warnings.push_back("element " + std::to_string(e) +
                           ": degenerate bubble operator, using linear shape functions");

  const std::size_t n_nodes = mesh.node_count();
  TridiagonalSystem full(n_nodes);
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const auto& k = elements.stiffness[e].entries;
    full.diag[e] += k[0][0];
    full.super[e] += k[0][1];
    full.sub[e] += k[1][0];
    full.diag[e + 1] += k[1][1];
  }

  // Boundary term -eps [w u']_a^b of the weak form.
  const double eps = coeffs.epsilon();
  if (!problem.left().is_dirichlet()) full.rhs.front() += eps * problem.left().value();
  if (!problem.right().is_dirichlet()) full.rhs.back() -= eps * problem.right().value();

  out.dirichlet_values.assign(n_nodes, 0.0);
  std::size_t first = 0;
  std::size_t last = n_nodes - 1;
  if (problem.left().is_dirichlet()) {
    const double g = problem.left().value();
    out.dirichlet_values.front() = g;
    full.rhs[1] -= full.sub[0] * g;
    first = 1;
  }
  if (problem.right().is_dirichlet()) {
    const double g = problem.right().value();
    out.dirichlet_values.back() = g;
    full.rhs[n_nodes - 2] -= full.super[n_nodes - 2] * g;
    last = n_nodes - 2;
  }

  out.first_free = first;
  if (last + 1 > first) {
    const std::size_t n = last - first + 1;
    out.system = TridiagonalSystem(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.system.diag[i] = full.diag[first + i];
      out.system.rhs[i] = full.rhs[first + i];
      if (i + 1 < n) {
        out.system.super[i] = full.super[first + i];
        out.system.sub[i] = full.sub[first + i];
      }
    }
  }
  out.shapes = std::move(elements.shapes);
  return out;
}

SolutionField solve_steady(const SteadyProblem& problem, const Mesh1D& mesh, EnrichmentKind enrichment,
                           const SteadyOptions& options, std::vector<std::string>* warnings) {
  SteadyAssembly assembly = assemble_steady(problem, mesh, enrichment, options);
  std::vector<double> u = std::move(assembly.dirichlet_values);
  const std::vector<double> free = solve_tridiagonal(assembly.system);
  std::copy(free.begin(), free.end(), u.begin() + static_cast<std::ptrdiff_t>(assembly.first_free));
  if (warnings != nullptr) warnings->insert(warnings->end(), assembly.warnings.begin(), assembly.warnings.end());

  if (enrichment.is_linear()) return SolutionField::piecewise_linear(mesh, std::move(u));

  const auto nb = static_cast<std::size_t>(enrichment.bubble_count());
  std::vector<std::vector<double>> bubbles(mesh.element_count(), std::vector<double>(nb, 0.0));
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const BubbleBasis& basis = assembly.shapes[e].bubble;
    if (basis.from_left.empty()) continue;  // linear fallback
    for (std::size_t k = 0; k < nb; ++k) bubbles[e][k] = u[e] * basis.from_left[k] + u[e + 1] * basis.from_right[k];
  }
  return SolutionField(mesh, std::move(u), enrichment, std::move(bubbles));
}

}  // namespace bubblefem
