#include "bubblefem/verification.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#include "bubblefem/errors.hpp"
#include "bubblefem/kernels.hpp"
#include "bubblefem/steady_assembly.hpp"
#include "bubblefem/transient_solver.hpp"

namespace bubblefem {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

SteadyProblem reaction_diffusion_benchmark() {
  return SteadyProblem(TransportCoefficients(-0.01, 0.0, 1.0), 0.0, 10.0, BoundaryCondition::dirichlet(1.5),
                       BoundaryCondition::neumann_flux(0.0));
}

TransientProblem heat_loss_benchmark() {
  return TransientProblem(-1.0, 0.0, kPi, [](double x) { return std::sin(x); }, 1.0);
}

double exact_steady_benchmark(double x) {
  if (!(x >= 0.0 && x <= 10.0)) throw DomainError("steady benchmark is defined on [0, 10]");
  return 1.5 * (std::exp(-10.0 * x) + std::exp(10.0 * x - 200.0)) / (1.0 + std::exp(-200.0));
}

double exact_transient_benchmark(double x, double t) {
  if (!(x >= 0.0 && x <= kPi) || !(t >= 0.0)) throw DomainError("transient benchmark is defined on [0, pi] x [0, inf)");
  return std::sin(x) * std::exp(-2.0 * t);
}

ErrorReport error_report(const SolutionField& field, const ScalarFunction& exact, int n_quad, Execution execution) {
  if (n_quad < kErrorQuadraturePoints) throw ArgumentError("error norms need at least 8 quadrature points");
  ErrorReport r;
  r.element_count = field.mesh().element_count();
  r.enrichment = field.enrichment();
  const auto nodes = field.mesh().nodes();
  const auto values = field.nodal_values();
  for (std::size_t i = 0; i < nodes.size(); ++i) r.nodal_linf = std::max(r.nodal_linf, std::abs(values[i] - exact(nodes[i])));
  r.l2 = std::sqrt(squared_l2_error(field, exact, n_quad, execution));
  return r;
}

std::vector<ErrorReport> convergence_study(const SteadyProblem& problem, const std::vector<EnrichmentKind>& enrichments,
                                           const std::vector<int>& element_counts, const ScalarFunction& exact,
                                           Execution execution, int quad_points) {
  for (int n : element_counts)
    if (n < 1) throw ArgumentError("element counts must be >= 1");
  const std::size_t runs = enrichments.size() * element_counts.size();
  std::vector<std::optional<ErrorReport>> reports(runs);
  std::exception_ptr failure;

  // Each run is serial inside; the fan-out is over runs.
  const auto run = [&](std::size_t i) {
    const EnrichmentKind kind = enrichments[i / element_counts.size()];
    const int n = element_counts[i % element_counts.size()];
    const Mesh1D mesh = uniform_mesh(problem.a(), problem.b(), n);
    const SolutionField field = solve_steady(problem, mesh, kind, SteadyOptions{quad_points, Execution::serial});
    reports[i] = error_report(field, exact, kErrorQuadraturePoints, Execution::serial);
  };

  if (execution == Execution::serial) {
    for (std::size_t i = 0; i < runs; ++i) run(i);
  } else {
    const auto n_runs = static_cast<std::ptrdiff_t>(runs);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n_runs; ++i) {
      try {
        run(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(bubblefem_convergence_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<ErrorReport> out;
  out.reserve(runs);
  for (auto& r : reports) out.push_back(*r);
  return out;
}

std::optional<ScalarFunction> known_exact_solution(const SteadyProblem& problem) {
  const auto& c = problem.coefficients();
  const bool is_benchmark = c.epsilon() == -0.01 && c.kappa() == 0.0 && c.lambda() == 1.0 && problem.a() == 0.0 &&
                            problem.b() == 10.0 && problem.left().is_dirichlet() && problem.left().value() == 1.5 &&
                            !problem.right().is_dirichlet() && problem.right().value() == 0.0;
  if (is_benchmark) return ScalarFunction(exact_steady_benchmark);

  if (c.kappa() == 0.0 && c.lambda() == 0.0 && problem.left().is_dirichlet() && problem.right().is_dirichlet()) {
    const double a = problem.a();
    const double b = problem.b();
    const double ua = problem.left().value();
    const double ub = problem.right().value();
    return ScalarFunction([=](double x) { return ua + (ub - ua) * (x - a) / (b - a); });
  }
  return std::nullopt;
}

std::vector<TableRow> table1(bool sign_compat) {
  const TransientProblem problem = heat_loss_benchmark();
  const SemiAnalyticSolution bubble = semi_analytic_two_element(problem, EnrichmentKind::quadratic_bubble(), sign_compat);
  const SemiAnalyticSolution linear = semi_analytic_two_element(problem, EnrichmentKind::linear(), false);
  std::vector<TableRow> rows;
  for (int k = 0; k <= 16; ++k) {
    const double x = k == 16 ? kPi : k * kPi / 16.0;
    rows.push_back({x, exact_transient_benchmark(x, 0.0), bubble(x, 0.0), linear(x, 0.0)});
  }
  return rows;
}

std::vector<TableRow> table2(bool sign_compat) {
  const TransientProblem problem = heat_loss_benchmark();
  const SemiAnalyticSolution bubble = semi_analytic_two_element(problem, EnrichmentKind::quadratic_bubble(), sign_compat);
  const SemiAnalyticSolution linear = semi_analytic_two_element(problem, EnrichmentKind::linear(), false);
  const double x = 7.0 * kPi / 8.0;
  std::vector<TableRow> rows;
  for (int k = 0; k <= 10; ++k) {
    const double t = k / 10.0;
    rows.push_back({t, exact_transient_benchmark(x, t), bubble(x, t), linear(x, t)});
  }
  return rows;
}

const std::vector<TableRow>& published_table1() {
  static const std::vector<TableRow> rows = [] {
    const double exact[9] = {0, 0.195, 0.382, 0.555, 0.707, 0.831, 0.923, 0.980, 1};
    const double bubble[9] = {0, 0.180, 0.345, 0.494, 0.627, 0.744, 0.845, 0.930, 1};
    const double linear[9] = {0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1};
    std::vector<TableRow> r;
    for (int k = 0; k <= 16; ++k) {
      const int m = k <= 8 ? k : 16 - k;
      r.push_back({k == 16 ? kPi : k * kPi / 16.0, exact[m], bubble[m], linear[m]});
    }
    return r;
  }();
  return rows;
}

const std::vector<TableRow>& published_table2() {
  static const std::vector<TableRow> rows = {
      {0.0, 0.382, 0.345, 0.25},   {0.1, 0.313, 0.281, 0.200}, {0.2, 0.256, 0.230, 0.160},
      {0.3, 0.210, 0.187, 0.128},  {0.4, 0.171, 0.153, 0.103}, {0.5, 0.140, 0.125, 0.082},
      {0.6, 0.115, 0.102, 0.066},  {0.7, 0.094, 0.083, 0.053}, {0.8, 0.077, 0.067, 0.042},
      {0.9, 0.063, 0.055, 0.034},  {1.0, 0.051, 0.045, 0.027},
  };
  return rows;
}

std::vector<TableComparison> compare_tables(const std::vector<TableRow>& published,
                                            const std::vector<TableRow>& computed) {
  if (published.size() != computed.size()) throw ArgumentError("table row count mismatch");
  std::vector<TableComparison> out;
  for (std::size_t i = 0; i < published.size(); ++i) {
    const bool pass = std::abs(computed[i].bubble - published[i].bubble) <= kTableTolerance &&
                      std::abs(computed[i].linear - published[i].linear) <= kTableTolerance;
    out.push_back({published[i], computed[i], pass});
  }
  return out;
}

}  // namespace bubblefem
