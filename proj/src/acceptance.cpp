#include "bubblefem/acceptance.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bubblefem/bubble_enrichment.hpp"
#include "bubblefem/steady_assembly.hpp"
#include "bubblefem/transient_solver.hpp"
#include "bubblefem/verification.hpp"

namespace bubblefem::acceptance {

namespace {

constexpr double kPi = std::numbers::pi;

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  double operator()(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
};

CriterionResult make(int id, std::string title, bool ok, std::string detail) {
  return {id, std::move(title), ok ? Status::pass : Status::fail, std::move(detail)};
}

double max_abs_entry(const ElementStiffness& k) {
  double m = 0.0;
  for (const auto& row : k.entries)
    for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

// 1. Quadratic closed forms versus the normal-equation minimiser.
CriterionResult closed_form_equivalence() {
  Draw draw(20240601);
  double worst13 = 0.0;
  double worst14 = 0.0;
  double worst30 = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const TransportCoefficients op(draw(-10.0, -1e-3), draw(-10.0, 10.0), draw(0.0, 10.0));
    const double l = draw(0.01, 5.0);
    const double u0 = draw(-2.0, 2.0);
    const double ul = draw(-2.0, 2.0);
    const double c_ls = ls_bubble(op, l, u0, ul, 2).coeffs[0];
    const EnrichmentAB ab = quadratic_ab(op, l);
    const double scale = std::abs(ab.a_coef - ab.b_coef) * std::abs(u0) + std::abs(ab.a_coef + ab.b_coef) * std::abs(ul);
    const double denom = scale > 0.0 ? scale : 1.0;
    worst13 = std::max(worst13, std::abs(quadratic_coefficient(op, l, u0, ul) - c_ls) / denom);
    worst14 = std::max(worst14, std::abs(ab.coefficient(u0, ul) - c_ls) / denom);
  }
  const TransportCoefficients bench(-0.01, 0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double l = draw(0.01, 5.0);
    const double u0 = draw(-2.0, 2.0);
    const double ul = draw(-2.0, 2.0);
    const double factor = reaction_diffusion_benchmark_factor(l);
    const double c_ls = ls_bubble(bench, l, u0, ul, 2).coeffs[0];
    const double scale = std::abs(factor) * (std::abs(u0) + std::abs(ul));
    worst30 = std::max(worst30, std::abs(factor * (u0 + ul) - c_ls) / scale);
    worst30 = std::max(worst30, std::abs(quadratic_ab(bench, l).a_coef - factor) / std::abs(factor));
  }
  const bool ok = worst13 <= 1e-10 && worst14 <= 1e-10 && worst30 <= 1e-12;
  return make(1, "quadratic closed forms match least-squares minimiser", ok,
              fmt::format("max rel dev c-formula {:.2e}, A/B {:.2e} (tol 1e-10); benchmark factor {:.2e} (tol 1e-12)",
                          worst13, worst14, worst30));
}

// 2. Transient coefficient magnitude and both signs.
CriterionResult transient_coefficient_magnitude() {
  const double l = kPi / 2.0;
  const double c = transient_coefficient(-1.0, l);
  const double c_ls = ls_bubble(TransportCoefficients(-1.0, 0.0, 1.0), l, 0.0, 1.0, 2).coeffs[0];
  const TransientSystem compat =
      assemble_transient(heat_loss_benchmark(), uniform_mesh(0.0, kPi, 2), EnrichmentKind::quadratic_bubble(), true);
  const double c_compat = compat.element_c[0];
  const bool ok = std::abs(std::abs(c) - 0.206) <= 5e-4 && std::abs(c - (-0.2062)) <= 5e-4 &&
                  std::abs(c_compat - 0.2062) <= 5e-4 && std::abs(c - c_ls) <= 1e-12 * std::abs(c);
  return make(2, "transient bubble coefficient |c| = 0.206", ok,
              fmt::format("canonical c = {:.6f}, least-squares c = {:.6f}, sign-compat c = {:+.6f}", c, c_ls,
                          c_compat));
}

// 3. Two-element decay rates.
CriterionResult decay_rates() {
  const TransientProblem p = heat_loss_benchmark();
  const double w_lin = semi_analytic_two_element(p, EnrichmentKind::linear(), false).omega;
  const double w_bub = semi_analytic_two_element(p, EnrichmentKind::quadratic_bubble(), true).omega;
  const bool ok = std::abs(w_lin - 2.216) <= 1e-3 && std::abs(w_bub - 2.031) <= 1e-3 &&
                  std::abs(w_bub - 2.0) < std::abs(w_lin - 2.0);
  return make(3, "two-element decay rates", ok,
              fmt::format("linear {:.5f} (2.216 +- 0.001), bubble {:.5f} (2.031 +- 0.001), exact 2", w_lin, w_bub));
}

// 4. Tables.
CriterionResult table_reproduction() {
  const auto t1 = compare_tables(published_table1(), table1());
  const auto t2 = compare_tables(published_table2(), table2());
  double worst = 0.0;
  std::size_t passed = 0;
  for (const auto* t : {&t1, &t2}) {
    for (const auto& row : *t) {
      passed += row.pass ? 1 : 0;
      worst = std::max({worst, std::abs(row.computed.bubble - row.published.bubble),
                        std::abs(row.computed.linear - row.published.linear)});
    }
  }
  const std::size_t total = t1.size() + t2.size();
  return make(4, "Table 1 (17 rows) and Table 2 (11 rows) reproduction", passed == total && total == 28,
              fmt::format("{}/{} rows within 0.001, worst cell deviation {:.5f}", passed, total, worst));
}

// 5. Closed-form element matrices versus quadrature.
CriterionResult element_matrix_oracle() {
  Draw draw(7331);
  double worst_steady = 0.0;
  double worst_transient = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const TransportCoefficients op(draw(-10.0, -1e-3), draw(-10.0, 10.0), draw(0.0, 10.0));
    const double l = draw(0.01, 5.0);
    const EnrichmentAB ab = quadratic_ab(op, l);
    const ElementStiffness closed = element_stiffness_closed(op, l, ab.a_coef, ab.b_coef);
    const ElementStiffness quad = element_stiffness_quadrature(op, shape_functions_ab(l, ab.a_coef, ab.b_coef), 4);
    double diff = 0.0;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) diff = std::max(diff, std::abs(closed.entries[r][c] - quad.entries[r][c]));
    worst_steady = std::max(worst_steady, diff / max_abs_entry(quad));

    const double eps = draw(-10.0, -1e-3);
    const double lt = draw(0.01, 5.0);
    const double c = draw(-4.0, 4.0) / (lt * lt);
    const auto mc = transient_element_matrices(eps, lt, c);
    const auto mq = transient_element_matrices_quadrature(eps, lt, c, 4);
    const double mass_scale = std::max(std::abs(mq.mass_diag), std::abs(mq.mass_off));
    const double stiff_scale = std::max(std::abs(mq.stiff_diag), std::abs(mq.stiff_off));
    worst_transient = std::max({worst_transient, std::abs(mc.mass_diag - mq.mass_diag) / mass_scale,
                                std::abs(mc.mass_off - mq.mass_off) / mass_scale,
                                std::abs(mc.stiff_diag - mq.stiff_diag) / stiff_scale,
                                std::abs(mc.stiff_off - mq.stiff_off) / stiff_scale});
  }
  const bool ok = worst_steady <= 1e-12 && worst_transient <= 1e-12;
  return make(5, "element matrices: closed forms match quadrature", ok,
              fmt::format("max rel dev E,F,G,H {:.2e}; L,M,N,P {:.2e} (tol 1e-12)", worst_steady, worst_transient));
}

// 6. Steady reaction-diffusion benchmark.
CriterionResult steady_benchmark() {
  const SteadyProblem problem = reaction_diffusion_benchmark();
  const auto reports = convergence_study(problem, {EnrichmentKind::linear(), EnrichmentKind::quadratic_bubble()},
                                         {30, 50}, exact_steady_benchmark);
  const double lin30 = reports[0].nodal_linf;
  const double lin50 = reports[1].nodal_linf;
  const double bub30 = reports[2].nodal_linf;
  const double bub50 = reports[3].nodal_linf;
  const double ratio = bub50 / lin50;
  const bool ok = bub30 < lin30 && bub50 < lin50 && ratio <= 0.10;
  return make(6, "reaction-diffusion benchmark: bubble beats linear", ok,
              fmt::format("nodal Linf 30 el: linear {:.3e} bubble {:.3e}; 50 el: linear {:.3e} bubble {:.3e} "
                          "(ratio {:.4f} <= 0.10)",
                          lin30, bub30, lin50, bub50, ratio));
}

// 7. 2D coefficient is the minimiser of the 2D functional.
CriterionResult two_dimensional_coefficient() {
  Draw draw(99);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double l = draw(0.1, 5.0);
    const double h = draw(0.1, 5.0);
    const RectCorners u{draw(-2.0, 2.0), draw(-2.0, 2.0), draw(-2.0, 2.0), draw(-2.0, 2.0)};
    const double c = bubble_2d_coefficient(l, h, u.u00, u.u0h, u.ul0, u.ulh);
    const double scale =
        15.0 * (std::abs(u.u00) + std::abs(u.u0h) + std::abs(u.ul0) + std::abs(u.ulh)) / (h * (l * l * l * l + 12.0 * h * h));
    const double jm = residual_functional_2d(l, h, u, -scale);
    const double j0 = residual_functional_2d(l, h, u, 0.0);
    const double jp = residual_functional_2d(l, h, u, scale);
    const double vertex = scale * (jm - jp) / (2.0 * (jp - 2.0 * j0 + jm));
    worst = std::max(worst, std::abs(vertex - c) / scale);
  }
  const double equal = bubble_2d_coefficient(1.3, 0.7, 0.4, 0.4, 0.4, 0.4);
  const bool ok = worst <= 1e-10 && equal == 0.0;
  return make(7, "2D bubble coefficient minimises the 2D residual functional", ok,
              fmt::format("max rel dev from parabola vertex {:.2e} (tol 1e-10); equal corners -> {}", worst, equal));
}

// 8. Property suite.
CriterionResult property_suite() {
  Draw draw(4242);
  std::vector<std::string> failures;

  // Bubble vanishes at element ends.
  bool endpoints_exact = true;
  for (int i = 0; i < 200; ++i) {
    const TransportCoefficients op(draw(-10.0, -1e-3), draw(-10.0, 10.0), draw(0.0, 10.0));
    const double l = draw(0.01, 5.0);
    const int order = 2 + i % 3;
    const ShapeFunctions s = shape_functions(op, l, EnrichmentKind::polynomial_bubble(order));
    endpoints_exact &= s.left(0.0) == 1.0 && s.left(l) == 0.0 && s.right(0.0) == 0.0 && s.right(l) == 1.0;
  }
  {
    const Mesh1D mesh = uniform_mesh(0.0, 10.0, 37);
    const SolutionField f = solve_steady(reaction_diffusion_benchmark(), mesh, EnrichmentKind::cubic_bubble());
    for (std::size_t j = 0; j < mesh.node_count(); ++j) {
      endpoints_exact &= f.eval(mesh.node(j)) == f.nodal_values()[j];
      if (j > 0) endpoints_exact &= f.eval_on_element(j - 1, mesh.node(j)) == f.nodal_values()[j];
    }
  }
  if (!endpoints_exact) failures.push_back("bubble does not vanish at element ends");

  // Stationarity of J_B and nested minimisation.
  double worst_grad = 0.0;
  bool monotone = true;
  for (int i = 0; i < 200; ++i) {
    const TransportCoefficients op(draw(-10.0, -1e-3), draw(-10.0, 10.0), draw(0.0, 10.0));
    const double l = draw(0.01, 5.0);
    const double u0 = draw(-2.0, 2.0);
    const double ul = draw(-2.0, 2.0);
    const double j0 = residual_functional(op, l, u0, ul, std::span<const double>{});
    const BubbleSolution quad = ls_bubble(op, l, u0, ul, 2);
    const BubbleSolution cub = ls_bubble(op, l, u0, ul, 3);
    for (const BubbleSolution* sol : {&quad, &cub}) {
      for (std::size_t k = 0; k < sol->coeffs.size(); ++k) {
        const ElementPolynomial image = apply_operator(op, ElementPolynomial::bubble(l, static_cast<int>(k) + 1));
        const double image_norm = std::sqrt(integrate_product(image, image, l));
        const double delta = 1e-3 / image_norm;
        std::vector<double> plus = sol->coeffs;
        std::vector<double> minus = sol->coeffs;
        plus[k] += delta;
        minus[k] -= delta;
        const double grad = (residual_functional(op, l, u0, ul, plus) - residual_functional(op, l, u0, ul, minus)) /
                            (2.0 * delta);
        const double scale = 2.0 * image_norm * std::sqrt(j0);
        if (scale > 0.0) worst_grad = std::max(worst_grad, std::abs(grad) / scale);
      }
    }
    const double slack = 1e-12 * j0;
    monotone &= cub.residual_value <= quad.residual_value + slack && quad.residual_value <= j0 + slack;
  }
  if (worst_grad > 1e-8) failures.push_back(fmt::format("J_B gradient {:.2e} > 1e-8", worst_grad));
  if (!monotone) failures.push_back("J_B(cubic) <= J_B(quadratic) <= J_B(0) violated");

  // Pure diffusion is exact at the nodes.
  double worst_diffusion = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double a = draw(-3.0, 0.0);
    const double b = a + draw(0.5, 5.0);
    const double ua = draw(-2.0, 2.0);
    const double ub = draw(-2.0, 2.0);
    const SteadyProblem p(TransportCoefficients(draw(-10.0, -1e-3), 0.0, 0.0), a, b, BoundaryCondition::dirichlet(ua),
                          BoundaryCondition::dirichlet(ub));
    std::vector<double> nodes{a};
    const int n = 1 + i % 20;
    for (int k = 1; k < n; ++k) nodes.push_back(a + (b - a) * (k + draw(-0.3, 0.3)) / n);
    nodes.push_back(b);
    const Mesh1D mesh(nodes);
    for (EnrichmentKind kind : {EnrichmentKind::linear(), EnrichmentKind::quadratic_bubble(), EnrichmentKind::cubic_bubble()}) {
      const SolutionField f = solve_steady(p, mesh, kind);
      for (std::size_t j = 0; j < mesh.node_count(); ++j) {
        const double exact = ua + (ub - ua) * (mesh.node(j) - a) / (b - a);
        worst_diffusion = std::max(worst_diffusion, std::abs(f.nodal_values()[j] - exact));
      }
    }
  }
  if (worst_diffusion > 1e-12) failures.push_back(fmt::format("pure diffusion nodal error {:.2e}", worst_diffusion));

  // Trapezoidal order against the exact two-element mode.
  const TransientProblem heat = heat_loss_benchmark();
  const Mesh1D two = uniform_mesh(0.0, kPi, 2);
  const SemiAnalyticSolution exact_mode = semi_analytic_two_element(heat, EnrichmentKind::quadratic_bubble(), true);
  std::vector<double> errors;
  for (double dt : {0.1, 0.05, 0.025}) {
    const Trajectory tr = solve_transient(heat, two, EnrichmentKind::quadratic_bubble(), dt, 1.0, true);
    errors.push_back(std::abs(tr.state(tr.size() - 1)[0] - exact_mode.amplitude * std::exp(-exact_mode.omega)));
  }
  const double order1 = std::log2(errors[0] / errors[1]);
  const double order2 = std::log2(errors[1] / errors[2]);
  if (!(order1 >= 1.9 && order1 <= 2.1 && order2 >= 1.9 && order2 <= 2.1))
    failures.push_back(fmt::format("trapezoidal order {:.3f}, {:.3f}", order1, order2));

  // Discrete energy a^T M a never increases.
  bool energy_ok = true;
  {
    const Mesh1D mesh = uniform_mesh(0.0, kPi, 16);
    const TransientProblem hat_problem(-0.5, 0.0, kPi, [](double x) { return std::min(x, kPi - x); }, 0.3);
    for (EnrichmentKind kind : {EnrichmentKind::linear(), EnrichmentKind::quadratic_bubble()}) {
      const Trajectory tr = solve_transient(hat_problem, mesh, kind, 0.05, 10.0, false);
      double prev = tr.system().mass.quadratic_form(tr.state(0));
      for (std::size_t i = 1; i < tr.size(); ++i) {
        const double e = tr.system().mass.quadratic_form(tr.state(i));
        energy_ok &= e <= prev * (1.0 + 1e-14);
        prev = e;
      }
    }
  }
  if (!energy_ok) failures.push_back("discrete energy increased");

  std::string detail = fmt::format(
      "endpoint exact {}, max rel grad {:.2e}, nested J ok {}, diffusion err {:.2e}, CN order {:.3f}/{:.3f}, energy ok {}",
      endpoints_exact, worst_grad, monotone, worst_diffusion, order1, order2, energy_ok);
  for (const auto& f : failures) detail += "; FAILED: " + f;
  return make(8, "property suite", failures.empty(), detail);
}

}  // namespace

std::vector<CriterionResult> run_all() {
  std::vector<CriterionResult> out;
  out.push_back(closed_form_equivalence());
  out.push_back(transient_coefficient_magnitude());
  out.push_back(decay_rates());
  out.push_back(table_reproduction());
  out.push_back(element_matrix_oracle());
  out.push_back(steady_benchmark());
  out.push_back(two_dimensional_coefficient());
  out.push_back(property_suite());
  out.push_back({9, "figure curves and error magnitudes", Status::informational,
                 "qualitative plots only; the numeric content is checked by criteria 4 and 6"});
  return out;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::none_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.status == Status::fail; });
}

std::string format_line(const CriterionResult& r) {
  const char* tag = r.status == Status::pass ? "PASS" : r.status == Status::fail ? "FAIL" : "INFO";
  return fmt::format("{} [{}] {}: {}", tag, r.id, r.title, r.detail);
}

}  // namespace bubblefem::acceptance
