#include "bubblefem/kernels.hpp"

#include <exception>
#include <string>

#include "bubblefem/errors.hpp"
#include "bubblefem/quadrature.hpp"

namespace bubblefem {

namespace {

// Shapes for one element, falling back to hats on a degenerate bubble.
bool element_shapes(const TransportCoefficients& coeffs, double l, EnrichmentKind enrichment, ShapeFunctions& out) {
  try {
    out = shape_functions(coeffs, l, enrichment);
    return false;
  } catch (const DegenerateOperatorError&) {
    out = shape_functions(coeffs, l, EnrichmentKind::linear());
    return true;
  }
}

QuadratureRule element_rule(EnrichmentKind enrichment, int n_quad) {
  if (n_quad < minimum_quadrature_points(enrichment))
    throw ArgumentError("element kernels need at least " + std::to_string(minimum_quadrature_points(enrichment)) +
                        " Gauss points for " + enrichment.name() + " elements");
  return gauss_rule(n_quad);
}

ElementKernelOutput allocate(const Mesh1D& mesh) {
  ElementKernelOutput out;
  out.shapes.resize(mesh.element_count());
  out.stiffness.resize(mesh.element_count());
  return out;
}

double element_squared_error(const SolutionField& field, const std::function<double(double)>& exact,
                             const QuadratureRule& rule, std::size_t e) {
  const Mesh1D& mesh = field.mesh();
  return integrate(
      rule,
      [&](double x) {
        const double d = field.eval_on_element(e, x) - exact(x);
        return d * d;
      },
      mesh.node(e), mesh.node(e + 1));
}

}  // namespace

namespace reference {

ElementKernelOutput element_kernels(const TransportCoefficients& coeffs, const Mesh1D& mesh,
                                    EnrichmentKind enrichment, int n_quad) {
  const QuadratureRule rule = element_rule(enrichment, n_quad);
  ElementKernelOutput out = allocate(mesh);
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    if (element_shapes(coeffs, mesh.length(e), enrichment, out.shapes[e])) out.fallback_elements.push_back(e);
    out.stiffness[e] = element_stiffness_quadrature(coeffs, out.shapes[e], rule);
  }
  return out;
}

double squared_l2_error(const SolutionField& field, const std::function<double(double)>& exact, int n_quad) {
  const QuadratureRule rule = gauss_rule(n_quad);
  double sum = 0.0;
  for (std::size_t e = 0; e < field.mesh().element_count(); ++e) sum += element_squared_error(field, exact, rule, e);
  return sum;
}

}  // namespace reference

ElementKernelOutput element_kernels(const TransportCoefficients& coeffs, const Mesh1D& mesh,
                                    EnrichmentKind enrichment, int n_quad, Execution execution) {
  if (execution == Execution::serial) return reference::element_kernels(coeffs, mesh, enrichment, n_quad);

  const QuadratureRule rule = element_rule(enrichment, n_quad);
  ElementKernelOutput out = allocate(mesh);
  const auto n = static_cast<std::ptrdiff_t>(mesh.element_count());
  std::vector<char> fell_back(mesh.element_count(), 0);
  std::exception_ptr failure;

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto e = static_cast<std::size_t>(i);
    try {
      fell_back[e] = element_shapes(coeffs, mesh.length(e), enrichment, out.shapes[e]) ? 1 : 0;
      out.stiffness[e] = element_stiffness_quadrature(coeffs, out.shapes[e], rule);
    } catch (...) {
#pragma omp critical(bubblefem_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t e = 0; e < fell_back.size(); ++e)
    if (fell_back[e]) out.fallback_elements.push_back(e);
  return out;
}

double squared_l2_error(const SolutionField& field, const std::function<double(double)>& exact, int n_quad,
                        Execution execution) {
  if (execution == Execution::serial) return reference::squared_l2_error(field, exact, n_quad);

  const QuadratureRule rule = gauss_rule(n_quad);
  const auto n = static_cast<std::ptrdiff_t>(field.mesh().element_count());
  double sum = 0.0;
  std::exception_ptr failure;
#pragma omp parallel for schedule(static) reduction(+ : sum)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      sum += element_squared_error(field, exact, rule, static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(bubblefem_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return sum;
}

}  // namespace bubblefem
