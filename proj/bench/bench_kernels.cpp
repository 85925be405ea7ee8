// Serial reference loops against the OpenMP kernels. Run with OMP_NUM_THREADS
// set to compare scaling; on one core the two should be within noise.
#include <benchmark/benchmark.h>

#include <cmath>

#include "bubblefem/kernels.hpp"
#include "bubblefem/steady_assembly.hpp"
#include "bubblefem/verification.hpp"

namespace {

using namespace bubblefem;

const TransportCoefficients kOp(-0.01, 0.3, 1.0);

void BM_ElementKernels(benchmark::State& state, Execution exec, EnrichmentKind kind) {
  const Mesh1D mesh = uniform_mesh(0.0, 10.0, static_cast<int>(state.range(0)));
  const int nq = default_quadrature_points(kind);
  for (auto _ : state) {
    auto out = exec == Execution::serial ? reference::element_kernels(kOp, mesh, kind, nq)
                                         : element_kernels(kOp, mesh, kind, nq, Execution::parallel);
    benchmark::DoNotOptimize(out.stiffness.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SquaredL2Error(benchmark::State& state, Execution exec) {
  const SteadyProblem problem = reaction_diffusion_benchmark();
  const Mesh1D mesh = uniform_mesh(0.0, 10.0, static_cast<int>(state.range(0)));
  const SolutionField field = solve_steady(problem, mesh, EnrichmentKind::quadratic_bubble());
  const auto exact = [](double x) { return exact_steady_benchmark(x); };
  for (auto _ : state) {
    const double e = exec == Execution::serial ? reference::squared_l2_error(field, exact, 8)
                                               : squared_l2_error(field, exact, 8, Execution::parallel);
    benchmark::DoNotOptimize(e);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(BM_ElementKernels, serial_quadratic, Execution::serial, EnrichmentKind::quadratic_bubble())
    ->RangeMultiplier(8)->Range(64, 32768);
BENCHMARK_CAPTURE(BM_ElementKernels, parallel_quadratic, Execution::parallel, EnrichmentKind::quadratic_bubble())
    ->RangeMultiplier(8)->Range(64, 32768);
BENCHMARK_CAPTURE(BM_ElementKernels, serial_p5, Execution::serial, EnrichmentKind::polynomial_bubble(5))
    ->RangeMultiplier(8)->Range(64, 32768);
BENCHMARK_CAPTURE(BM_ElementKernels, parallel_p5, Execution::parallel, EnrichmentKind::polynomial_bubble(5))
    ->RangeMultiplier(8)->Range(64, 32768);
BENCHMARK_CAPTURE(BM_SquaredL2Error, serial, Execution::serial)->RangeMultiplier(8)->Range(64, 32768);
BENCHMARK_CAPTURE(BM_SquaredL2Error, parallel, Execution::parallel)->RangeMultiplier(8)->Range(64, 32768);

BENCHMARK_MAIN();
