#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bubblefem {

/// Operator coefficients of  epsilon*u'' + kappa*u' + lambda*u = 0.
///
/// Values are stored exactly as given; the benchmark problems use a negative
/// epsilon (e.g. -1/100), so no sign normalisation happens anywhere.
class TransportCoefficients {
 public:
  TransportCoefficients(double epsilon, double kappa, double lambda);

  double epsilon() const noexcept { return epsilon_; }
  double kappa() const noexcept { return kappa_; }
  double lambda() const noexcept { return lambda_; }

  friend bool operator==(const TransportCoefficients&, const TransportCoefficients&) = default;

 private:
  double epsilon_;
  double kappa_;
  double lambda_;
};

/// Strictly increasing node coordinates x_0 < x_1 < ... < x_N, N >= 1.
class Mesh1D {
 public:
  explicit Mesh1D(std::vector<double> nodes);

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t element_count() const noexcept { return nodes_.size() - 1; }
  double node(std::size_t i) const { return nodes_.at(i); }
  double length(std::size_t element) const { return nodes_.at(element + 1) - nodes_.at(element); }
  double left() const noexcept { return nodes_.front(); }
  double right() const noexcept { return nodes_.back(); }

  /// Index of the element containing x. Interior nodes belong to the element
  /// on their right; the right end belongs to the last element.
  /// Throws DomainError if x is outside [left, right].
  std::size_t locate(double x) const;

 private:
  std::vector<double> nodes_;
};

Mesh1D uniform_mesh(double a, double b, int n_elements);

class BoundaryCondition {
 public:
  enum class Kind { Dirichlet, NeumannFlux };

  static BoundaryCondition dirichlet(double value);
  /// Prescribed du/dx at the boundary.
  static BoundaryCondition neumann_flux(double value);

  Kind kind() const noexcept { return kind_; }
  double value() const noexcept { return value_; }
  bool is_dirichlet() const noexcept { return kind_ == Kind::Dirichlet; }

 private:
  BoundaryCondition(Kind kind, double value);
  Kind kind_;
  double value_;
};

/// Linear hats (order 1) or hats enriched with a polynomial bubble of order p >= 2,
/// spanned by x^k (l - x), k = 1..p-1, on the master element [0, l].
class EnrichmentKind {
 public:
  static EnrichmentKind linear() noexcept { return EnrichmentKind(1); }
  static EnrichmentKind quadratic_bubble() noexcept { return EnrichmentKind(2); }
  static EnrichmentKind cubic_bubble() noexcept { return EnrichmentKind(3); }
  static EnrichmentKind polynomial_bubble(int order);

  /// Accepts "linear", "quadratic", "cubic" or "pN" / "polynomial:N".
  static EnrichmentKind parse(std::string_view text);

  int order() const noexcept { return order_; }
  bool is_linear() const noexcept { return order_ == 1; }
  /// Number of bubble coefficients per element (p - 1, zero for linear).
  int bubble_count() const noexcept { return order_ - 1; }
  std::string name() const;

  friend bool operator==(EnrichmentKind, EnrichmentKind) = default;

 private:
  explicit EnrichmentKind(int order) noexcept : order_(order) {}
  int order_;
};

class SteadyProblem {
 public:
  SteadyProblem(TransportCoefficients coefficients, double a, double b,
                BoundaryCondition left, BoundaryCondition right);

  const TransportCoefficients& coefficients() const noexcept { return coefficients_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  const BoundaryCondition& left() const noexcept { return left_; }
  const BoundaryCondition& right() const noexcept { return right_; }

 private:
  TransportCoefficients coefficients_;
  double a_;
  double b_;
  BoundaryCondition left_;
  BoundaryCondition right_;
};

/// u_t + epsilon*u_xx + lambda*u = 0 on [a, b], u = 0 at both ends,
/// u(x, 0) = initial_profile(x). There is no convection term.
class TransientProblem {
 public:
  using Profile = std::function<double(double)>;

  TransientProblem(double epsilon, double a, double b, Profile initial_profile,
                   double lambda = 1.0);

  double epsilon() const noexcept { return epsilon_; }
  double lambda() const noexcept { return lambda_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double initial(double x) const { return initial_profile_(x); }
  const Profile& initial_profile() const noexcept { return initial_profile_; }

 private:
  double epsilon_;
  double lambda_;
  double a_;
  double b_;
  Profile initial_profile_;
};

/// Nodal values plus per-element bubble coefficients. On element j with local
/// coordinate s = x - x_j in [0, l_j]:
///
///   u(x) = (l - s)/l * u_j + s/l * u_{j+1} + sum_k c_{j,k} s^k (l - s)
///
/// The bubble terms vanish at the element ends, so the field interpolates the
/// nodal values and is continuous.
class SolutionField {
 public:
  SolutionField(Mesh1D mesh, std::vector<double> nodal_values, EnrichmentKind enrichment,
                std::vector<std::vector<double>> bubble_coeffs);

  /// Field without bubble terms.
  static SolutionField piecewise_linear(Mesh1D mesh, std::vector<double> nodal_values);

  const Mesh1D& mesh() const noexcept { return mesh_; }
  std::span<const double> nodal_values() const noexcept { return nodal_values_; }
  EnrichmentKind enrichment() const noexcept { return enrichment_; }
  /// Empty span for a linear field.
  std::span<const double> bubble_coeffs(std::size_t element) const;

  double operator()(double x) const { return eval(x); }
  double eval(double x) const;
  /// Evaluates the restriction to one element (useful for one-sided limits).
  double eval_on_element(std::size_t element, double x) const;
  double derivative_on_element(std::size_t element, double x) const;

 private:
  Mesh1D mesh_;
  std::vector<double> nodal_values_;
  EnrichmentKind enrichment_;
  std::vector<std::vector<double>> bubble_coeffs_;
};

double eval_field(const SolutionField& field, double x);

}  // namespace bubblefem
