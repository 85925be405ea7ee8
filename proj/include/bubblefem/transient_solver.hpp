#pragma once

#include <span>
#include <string>
#include <vector>

#include "bubblefem/problem_model.hpp"
#include "bubblefem/tridiagonal.hpp"

namespace bubblefem {

/// Element mass [[L, M], [M, L]] and stiffness [[N, P], [P, N]] for the shape
/// functions (l-x)/l + c x(l-x) and x/l + c x(l-x):
///   L = (c^2 l^6 + 5 c l^4 + 10 l^2) / (30 l)
///   M = (c^2 l^6 + 5 c l^4 +  5 l^2) / (30 l)
///   N = -eps (10 c^2 l^4 + 30) / (30 l)
///   P = -eps (10 c^2 l^4 - 30) / (30 l)
struct TransientElementMatrices {
  double mass_diag = 0.0;
  double mass_off = 0.0;
  double stiff_diag = 0.0;
  double stiff_off = 0.0;
};

TransientElementMatrices transient_element_matrices(double epsilon, double l, double c);

/// Same entries by Gauss quadrature of the element integrals (oracle for the closed forms).
TransientElementMatrices transient_element_matrices_quadrature(double epsilon, double l, double c, int n_quad = 4);

/// Semi-discrete system  M a' + (lambda M + K) a = 0  over the interior nodes.
struct TransientSystem {
  SymmetricTridiagonal mass;
  SymmetricTridiagonal stiffness;
  double lambda = 1.0;
  Mesh1D mesh;
  EnrichmentKind enrichment = EnrichmentKind::linear();
  /// Bubble coefficient c of each element; the bubble of element j carries
  /// c_j (u_j + u_{j+1}) x (l - x).
  std::vector<double> element_c;
  bool sign_compat = false;
  std::vector<std::string> warnings;

  std::size_t dimension() const noexcept { return mass.size(); }
  /// lambda M + K
  SymmetricTridiagonal decay_operator() const { return combine(lambda, mass, 1.0, stiffness); }
  /// Nodal field for interior values `state` (zero boundary values).
  SolutionField field(std::span<const double> state) const;
};

/// Assembles the global mass and stiffness matrices and removes the boundary
/// rows and columns. Supports linear and quadratic-bubble elements. The bubble
/// coefficient is the least-squares one for eps u'' + lambda u = 0; with
/// sign_compat its sign is flipped to match the published two-element results.
TransientSystem assemble_transient(const TransientProblem& problem, const Mesh1D& mesh, EnrichmentKind enrichment,
                                   bool sign_compat);

/// Smallest omega with (lambda M + K) v = omega M v, so that the slowest mode
/// decays like exp(-omega t). Throws AssemblyError if M is not SPD.
double slowest_decay_rate(const TransientSystem& system);

/// One Crank-Nicolson (trapezoidal) step:
///   (M + dt/2 S) a_{n+1} = (M - dt/2 S) a_n,  S = lambda M + K.
std::vector<double> step_trapezoidal(const TransientSystem& system, std::span<const double> state, double dt);

class Trajectory {
 public:
  Trajectory(TransientSystem system, std::vector<double> times, std::vector<std::vector<double>> states);

  std::span<const double> times() const noexcept { return times_; }
  /// Interior nodal values at times()[i].
  std::span<const double> state(std::size_t i) const { return states_.at(i); }
  std::size_t size() const noexcept { return times_.size(); }
  const TransientSystem& system() const noexcept { return system_; }

  /// Index of the stored time closest to t. Throws DomainError outside [t_0, t_last].
  std::size_t nearest(double t) const;
  SolutionField field(std::size_t i) const { return system_.field(states_.at(i)); }
  double eval(double x, double t) const;

 private:
  TransientSystem system_;
  std::vector<double> times_;
  std::vector<std::vector<double>> states_;
};

/// Nodal interpolation of the initial profile followed by trapezoidal steps of
/// size dt (the last step is shortened to land on t_end). Every `stride`-th
/// state is stored, plus the initial and final states.
Trajectory solve_transient(const TransientProblem& problem, const Mesh1D& mesh, EnrichmentKind enrichment, double dt,
                           double t_end, bool sign_compat, std::size_t stride = 1);

/// Exact solution of the two-element semi-discrete system: a single mode
/// amplitude * exp(-omega t) expanded through the (enriched) element basis.
struct SemiAnalyticSolution {
  double omega = 0.0;
  double amplitude = 0.0;
  SolutionField shape;  ///< spatial profile at t = 0

  double operator()(double x, double t) const;
};

SemiAnalyticSolution semi_analytic_two_element(const TransientProblem& problem, EnrichmentKind enrichment,
                                               bool sign_compat);

}  // namespace bubblefem
