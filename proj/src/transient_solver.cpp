#include "bubblefem/transient_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bubblefem/bubble_enrichment.hpp"
#include "bubblefem/errors.hpp"
#include "bubblefem/quadrature.hpp"

namespace bubblefem {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ArgumentError(std::string(what) + " must be positive");
}

// Lower Gershgorin bound of the mass matrix; positive for every valid element.
double mass_lower_bound(const SymmetricTridiagonal& m) {
  double bound = INFINITY;
  double min_diag = INFINITY;
  for (std::size_t i = 0; i < m.size(); ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(m.off[i - 1]);
    if (i + 1 < m.size()) radius += std::abs(m.off[i]);
    bound = std::min(bound, m.diag[i] - radius);
    min_diag = std::min(min_diag, m.diag[i]);
  }
  return bound > 0.0 ? bound : 1e-3 * min_diag;
}

double max_row_sum(const SymmetricTridiagonal& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    double s = std::abs(m.diag[i]);
    if (i > 0) s += std::abs(m.off[i - 1]);
    if (i + 1 < m.size()) s += std::abs(m.off[i]);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

TransientElementMatrices transient_element_matrices(double epsilon, double l, double c) {
  require_positive(l, "element length");
  const double l2 = l * l;
  const double l4 = l2 * l2;
  const double l6 = l4 * l2;
  const double c2 = c * c;
  TransientElementMatrices m;
  m.mass_diag = (c2 * l6 + 5.0 * c * l4 + 10.0 * l2) / (30.0 * l);
  m.mass_off = (c2 * l6 + 5.0 * c * l4 + 5.0 * l2) / (30.0 * l);
  m.stiff_diag = -epsilon * (10.0 * c2 * l4 + 30.0) / (30.0 * l);
  m.stiff_off = -epsilon * (10.0 * c2 * l4 - 30.0) / (30.0 * l);
  return m;
}

TransientElementMatrices transient_element_matrices_quadrature(double epsilon, double l, double c, int n_quad) {
  require_positive(l, "element length");
  const QuadratureRule rule = gauss_rule(n_quad);
  const auto w0 = [&](double x) { return (l - x) / l + c * x * (l - x); };
  const auto w1 = [&](double x) { return x / l + c * x * (l - x); };
  const auto dw0 = [&](double x) { return -1.0 / l + c * (l - 2.0 * x); };
  const auto dw1 = [&](double x) { return 1.0 / l + c * (l - 2.0 * x); };
  TransientElementMatrices m;
  m.mass_diag = integrate(rule, [&](double x) { return w0(x) * w0(x); }, 0.0, l);
  m.mass_off = integrate(rule, [&](double x) { return w0(x) * w1(x); }, 0.0, l);
  m.stiff_diag = integrate(rule, [&](double x) { return -epsilon * dw0(x) * dw0(x); }, 0.0, l);
  m.stiff_off = integrate(rule, [&](double x) { return -epsilon * dw0(x) * dw1(x); }, 0.0, l);
  return m;
}

SolutionField TransientSystem::field(std::span<const double> state) const {
  if (state.size() != dimension()) throw ArgumentError("state dimension does not match transient system");
  std::vector<double> u(mesh.node_count(), 0.0);
  std::copy(state.begin(), state.end(), u.begin() + 1);
  if (enrichment.is_linear()) return SolutionField::piecewise_linear(mesh, std::move(u));
  std::vector<std::vector<double>> bubbles(mesh.element_count());
  for (std::size_t e = 0; e < mesh.element_count(); ++e) bubbles[e] = {element_c[e] * (u[e] + u[e + 1])};
  return SolutionField(mesh, std::move(u), enrichment, std::move(bubbles));
}

TransientSystem assemble_transient(const TransientProblem& problem, const Mesh1D& mesh, EnrichmentKind enrichment,
                                   bool sign_compat) {
  if (enrichment.order() > 2)
    throw ArgumentError("transient solver supports linear and quadratic enrichment, got " + enrichment.name());
  const double tol = 1e-12 * std::max({1.0, std::abs(problem.a()), std::abs(problem.b())});
  if (std::abs(mesh.left() - problem.a()) > tol || std::abs(mesh.right() - problem.b()) > tol)
    throw AssemblyError("mesh does not match the transient problem domain");

  TransientSystem sys{.mass = {}, .stiffness = {}, .lambda = problem.lambda(), .mesh = mesh,
                      .enrichment = enrichment, .element_c = {}, .sign_compat = sign_compat, .warnings = {}};
  const std::size_t n_el = mesh.element_count();
  sys.element_c.assign(n_el, 0.0);
  if (!enrichment.is_linear()) {
    const TransportCoefficients op(problem.epsilon(), 0.0, problem.lambda());
    for (std::size_t e = 0; e < n_el; ++e) {
      try {
        const double c = ls_bubble(op, mesh.length(e), 0.0, 1.0, 2).coeffs[0];
        sys.element_c[e] = sign_compat ? -c : c;
      } catch (const DegenerateOperatorError&) {
        sys.warnings.push_back("element " + std::to_string(e) + ": degenerate bubble operator, using c = 0");
      }
    }
  }

  // Full (N+1)-node matrices, then drop the two boundary rows/columns.
  const std::size_t n_nodes = mesh.node_count();
  SymmetricTridiagonal mass{std::vector<double>(n_nodes, 0.0), std::vector<double>(n_nodes - 1, 0.0)};
  SymmetricTridiagonal stiff = mass;
  for (std::size_t e = 0; e < n_el; ++e) {
    const auto m = transient_element_matrices(problem.epsilon(), mesh.length(e), sys.element_c[e]);
    mass.diag[e] += m.mass_diag;
    mass.diag[e + 1] += m.mass_diag;
    mass.off[e] += m.mass_off;
    stiff.diag[e] += m.stiff_diag;
    stiff.diag[e + 1] += m.stiff_diag;
    stiff.off[e] += m.stiff_off;
  }
  const std::size_t n = n_nodes - 2;
  const auto interior = [n](const SymmetricTridiagonal& full) {
    SymmetricTridiagonal r;
    r.diag.assign(full.diag.begin() + 1, full.diag.begin() + 1 + static_cast<std::ptrdiff_t>(n));
    if (n > 1) r.off.assign(full.off.begin() + 1, full.off.begin() + static_cast<std::ptrdiff_t>(n));
    return r;
  };
  sys.mass = interior(mass);
  sys.stiffness = interior(stiff);
  return sys;
}

double slowest_decay_rate(const TransientSystem& system) {
  const std::size_t n = system.dimension();
  if (n == 0) throw ArgumentError("decay rate needs at least one interior node");
  if (!is_positive_definite(system.mass)) throw AssemblyError("global mass matrix is not positive definite");
  const SymmetricTridiagonal op = system.decay_operator();
  if (n == 1) return op.diag[0] / system.mass.diag[0];

  // Shifted inverse iteration; the shift keeps op - shift*M positive definite so
  // the iteration converges to the bottom of the spectrum.
  double shift = 0.0;
  const double step = max_row_sum(op) / mass_lower_bound(system.mass);
  SymmetricTridiagonal shifted = op;
  for (int tries = 0; !is_positive_definite(shifted); ++tries) {
    if (tries > 60) throw AssemblyError("could not bracket the smallest generalised eigenvalue");
    shift -= step * (1 << std::min(tries, 20));
    shifted = combine(1.0, op, -shift, system.mass);
  }

  std::vector<double> v(n, 1.0);
  double omega = op.quadratic_form(v) / system.mass.quadratic_form(v);
  for (int it = 0; it < 10000; ++it) {
    std::vector<double> y = solve_tridiagonal(as_system(shifted, system.mass.multiply(v)));
    const double norm = std::sqrt(system.mass.quadratic_form(y));
    for (double& yi : y) yi /= norm;
    const double next = op.quadratic_form(y);
    v = std::move(y);
    const bool done = std::abs(next - omega) <= 1e-10 * std::abs(next) + 1e-300;
    omega = next;
    if (done) break;
  }
  return omega;
}

std::vector<double> step_trapezoidal(const TransientSystem& system, std::span<const double> state, double dt) {
  require_positive(dt, "time step");
  if (state.size() != system.dimension()) throw ArgumentError("state dimension does not match transient system");
  if (state.empty()) return {};
  const SymmetricTridiagonal op = system.decay_operator();
  const SymmetricTridiagonal lhs = combine(1.0, system.mass, 0.5 * dt, op);
  const SymmetricTridiagonal rhs_op = combine(1.0, system.mass, -0.5 * dt, op);
  return solve_tridiagonal(as_system(lhs, rhs_op.multiply(state)));
}

Trajectory::Trajectory(TransientSystem system, std::vector<double> times, std::vector<std::vector<double>> states)
    : system_(std::move(system)), times_(std::move(times)), states_(std::move(states)) {
  if (times_.empty() || times_.size() != states_.size()) throw ArgumentError("trajectory needs one state per time");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1])) throw ArgumentError("trajectory times must be strictly increasing");
  for (const auto& s : states_)
    if (s.size() != system_.dimension()) throw ArgumentError("trajectory state has wrong dimension");
}

std::size_t Trajectory::nearest(double t) const {
  if (!(t >= times_.front() && t <= times_.back()))
    throw DomainError("time " + std::to_string(t) + " outside trajectory range");
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  auto idx = static_cast<std::size_t>(std::distance(times_.begin(), it));
  if (idx > 0 && (idx == times_.size() || t - times_[idx - 1] <= times_[idx] - t)) --idx;
  return idx;
}

double Trajectory::eval(double x, double t) const { return field(nearest(t)).eval(x); }

Trajectory solve_transient(const TransientProblem& problem, const Mesh1D& mesh, EnrichmentKind enrichment, double dt,
                           double t_end, bool sign_compat, std::size_t stride) {
  require_positive(dt, "time step");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ArgumentError("end time must be non-negative");
  if (stride == 0) throw ArgumentError("stride must be at least 1");

  TransientSystem system = assemble_transient(problem, mesh, enrichment, sign_compat);
  std::vector<double> state(system.dimension());
  for (std::size_t i = 0; i < state.size(); ++i) state[i] = problem.initial(mesh.node(i + 1));

  std::vector<double> times{0.0};
  std::vector<std::vector<double>> states{state};

  auto full_steps = static_cast<std::size_t>(std::floor(t_end / dt * (1.0 + 1e-12)));
  const double remainder = t_end - static_cast<double>(full_steps) * dt;
  const bool partial = remainder > 1e-12 * std::max(1.0, t_end);
  const std::size_t total = full_steps + (partial ? 1 : 0);
  for (std::size_t k = 1; k <= total; ++k) {
    const bool last = k == total;
    const double h = (partial && last) ? remainder : dt;
    state = step_trapezoidal(system, state, h);
    if (k % stride == 0 || last) {
      times.push_back(last ? t_end : static_cast<double>(k) * dt);
      states.push_back(state);
    }
  }
  return Trajectory(std::move(system), std::move(times), std::move(states));
}

double SemiAnalyticSolution::operator()(double x, double t) const {
  if (!(t >= 0.0)) throw DomainError("time must be non-negative");
  return shape.eval(x) * std::exp(-omega * t);
}

SemiAnalyticSolution semi_analytic_two_element(const TransientProblem& problem, EnrichmentKind enrichment,
                                               bool sign_compat) {
  const Mesh1D mesh = uniform_mesh(problem.a(), problem.b(), 2);
  const TransientSystem system = assemble_transient(problem, mesh, enrichment, sign_compat);
  const double amplitude = problem.initial(mesh.node(1));
  const std::vector<double> state{amplitude};
  return SemiAnalyticSolution{slowest_decay_rate(system), amplitude, system.field(state)};
}

}  // namespace bubblefem
