#pragma once

#include <functional>
#include <vector>

#include "bubblefem/execution.hpp"
#include "bubblefem/steady_assembly.hpp"

namespace bubblefem {

/// Per-element shapes and stiffness blocks for a whole mesh.
struct ElementKernelOutput {
  std::vector<ShapeFunctions> shapes;
  std::vector<ElementStiffness> stiffness;
  /// Elements whose bubble was degenerate and which use linear shapes instead.
  std::vector<std::size_t> fallback_elements;
};

/// Element loop over the mesh; Execution::parallel distributes elements over
/// OpenMP threads. Results are identical to the serial reference.
ElementKernelOutput element_kernels(const TransportCoefficients& coeffs, const Mesh1D& mesh,
                                    EnrichmentKind enrichment, int n_quad, Execution execution);

/// Per-element integrals of (field - exact)^2 summed over the mesh.
double squared_l2_error(const SolutionField& field, const std::function<double(double)>& exact, int n_quad,
                        Execution execution);

namespace reference {

/// Plain serial loops, kept as the oracle for the OpenMP versions.
ElementKernelOutput element_kernels(const TransportCoefficients& coeffs, const Mesh1D& mesh,
                                    EnrichmentKind enrichment, int n_quad);
double squared_l2_error(const SolutionField& field, const std::function<double(double)>& exact, int n_quad);

}  // namespace reference

}  // namespace bubblefem
