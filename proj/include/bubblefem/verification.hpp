#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "bubblefem/execution.hpp"
#include "bubblefem/problem_model.hpp"

namespace bubblefem {

using ScalarFunction = std::function<double(double)>;

// Benchmark problems.

/// -u''/100 + u = 0 on [0, 10], u(0) = 3/2, u'(10) = 0.
SteadyProblem reaction_diffusion_benchmark();

/// u_t - u_xx + u = 0 on [0, pi], u(x, 0) = sin x, u = 0 at both ends.
TransientProblem heat_loss_benchmark();

/// Exact solution of reaction_diffusion_benchmark, evaluated as
/// 1.5 (e^{-10x} + e^{10x - 200}) / (1 + e^{-200}) so nothing overflows.
double exact_steady_benchmark(double x);

/// sin(x) exp(-2t) on [0, pi] x [0, inf).
double exact_transient_benchmark(double x, double t);

// Error measures.

struct ErrorReport {
  double nodal_linf = 0.0;
  double l2 = 0.0;
  std::size_t element_count = 0;
  EnrichmentKind enrichment = EnrichmentKind::linear();
};

inline constexpr int kErrorQuadraturePoints = 8;

/// Nodal max error plus the L2 norm of (field - exact) including the bubble
/// reconstruction, with n_quad >= 8 Gauss points per element.
ErrorReport error_report(const SolutionField& field, const ScalarFunction& exact,
                         int n_quad = kErrorQuadraturePoints, Execution execution = Execution::parallel);

/// One report per (enrichment, element count), uniform meshes, in
/// enrichment-major order. Independent solves are distributed over OpenMP
/// threads when execution is parallel. quad_points = 0 picks the per-order default.
std::vector<ErrorReport> convergence_study(const SteadyProblem& problem, const std::vector<EnrichmentKind>& enrichments,
                                           const std::vector<int>& element_counts, const ScalarFunction& exact,
                                           Execution execution = Execution::parallel, int quad_points = 0);

/// Exact solution when one is known in closed form: the reaction-diffusion
/// benchmark, or pure diffusion with Dirichlet values at both ends.
std::optional<ScalarFunction> known_exact_solution(const SteadyProblem& problem);

// Two-element transient tables.

struct TableRow {
  double coordinate = 0.0;  ///< x for the t = 0 profile, t for the x = 7pi/8 history
  double exact = 0.0;
  double bubble = 0.0;
  double linear = 0.0;
};

/// Profile at t = 0 for x = k pi/16, k = 0..16 (17 rows). The bubble column
/// uses the sign-flipped coefficient unless sign_compat is false.
std::vector<TableRow> table1(bool sign_compat = true);
/// History at x = 7 pi/8 for t = 0, 0.1, ..., 1 (11 rows).
std::vector<TableRow> table2(bool sign_compat = true);

/// Published 3-decimal values, same layout as table1()/table2().
const std::vector<TableRow>& published_table1();
const std::vector<TableRow>& published_table2();

inline constexpr double kTableTolerance = 1e-3;

struct TableComparison {
  TableRow published;
  TableRow computed;
  bool pass = false;  ///< both computed columns within kTableTolerance
};

std::vector<TableComparison> compare_tables(const std::vector<TableRow>& published,
                                            const std::vector<TableRow>& computed);

}  // namespace bubblefem
