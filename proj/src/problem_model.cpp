#include "bubblefem/problem_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "bubblefem/errors.hpp"

namespace bubblefem {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ArgumentError(std::string(what) + " must be finite");
}

void require_interval(double a, double b) {
  require_finite(a, "domain start");
  require_finite(b, "domain end");
  if (!(a < b)) throw ArgumentError("domain requires a < b");
}

}  // namespace

TransportCoefficients::TransportCoefficients(double epsilon, double kappa, double lambda)
    : epsilon_(epsilon), kappa_(kappa), lambda_(lambda) {
  require_finite(epsilon, "epsilon");
  require_finite(kappa, "kappa");
  require_finite(lambda, "lambda");
  if (epsilon == 0.0 && kappa == 0.0 && lambda == 0.0)
    throw ArgumentError("transport operator is null (epsilon = kappa = lambda = 0)");
}

Mesh1D::Mesh1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw ArgumentError("mesh needs at least two nodes");
  for (double x : nodes_) require_finite(x, "mesh node");
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    if (!(nodes_[i + 1] - nodes_[i] > 0.0))
      throw ArgumentError("mesh nodes must be strictly increasing");
  }
}

std::size_t Mesh1D::locate(double x) const {
  if (!(x >= nodes_.front() && x <= nodes_.back()))
    throw DomainError("point " + std::to_string(x) + " outside mesh [" +
                      std::to_string(nodes_.front()) + ", " + std::to_string(nodes_.back()) +
                      "]");
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  auto idx = static_cast<std::size_t>(std::distance(nodes_.begin(), it));
  if (idx == 0) return 0;
  return std::min(idx - 1, element_count() - 1);
}

Mesh1D uniform_mesh(double a, double b, int n_elements) {
  require_interval(a, b);
  if (n_elements < 1) throw ArgumentError("uniform_mesh needs at least one element");
  std::vector<double> nodes(static_cast<std::size_t>(n_elements) + 1);
  const double h = (b - a) / n_elements;
  for (int i = 0; i <= n_elements; ++i) nodes[static_cast<std::size_t>(i)] = a + i * h;
  nodes.back() = b;
  return Mesh1D(std::move(nodes));
}

BoundaryCondition::BoundaryCondition(Kind kind, double value) : kind_(kind), value_(value) {
  require_finite(value, "boundary value");
}

BoundaryCondition BoundaryCondition::dirichlet(double value) {
  return BoundaryCondition(Kind::Dirichlet, value);
}

BoundaryCondition BoundaryCondition::neumann_flux(double value) {
  return BoundaryCondition(Kind::NeumannFlux, value);
}

EnrichmentKind EnrichmentKind::polynomial_bubble(int order) {
  if (order < 2) throw ArgumentError("bubble order must be >= 2");
  return EnrichmentKind(order);
}

EnrichmentKind EnrichmentKind::parse(std::string_view text) {
  if (text == "linear") return linear();
  if (text == "quadratic") return quadratic_bubble();
  if (text == "cubic") return cubic_bubble();
  std::string_view digits;
  if (text.starts_with("polynomial:"))
    digits = text.substr(11);
  else if (text.starts_with("p"))
    digits = text.substr(1);
  int order = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), order);
  if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size())
    throw ArgumentError("unknown enrichment '" + std::string(text) +
                        "' (expected linear, quadratic, cubic or pN)");
  return order == 1 ? linear() : polynomial_bubble(order);
}

std::string EnrichmentKind::name() const {
  switch (order_) {
    case 1: return "linear";
    case 2: return "quadratic";
    case 3: return "cubic";
    default: return "p" + std::to_string(order_);
  }
}

SteadyProblem::SteadyProblem(TransportCoefficients coefficients, double a, double b,
                             BoundaryCondition left, BoundaryCondition right)
    : coefficients_(coefficients), a_(a), b_(b), left_(left), right_(right) {
  require_interval(a, b);
  if (!left.is_dirichlet() && !right.is_dirichlet())
    throw IllPosedError("steady problem needs a Dirichlet condition on at least one end");
}

TransientProblem::TransientProblem(double epsilon, double a, double b, Profile initial_profile,
                                   double lambda)
    : epsilon_(epsilon), lambda_(lambda), a_(a), b_(b), initial_profile_(std::move(initial_profile)) {
  require_finite(epsilon, "epsilon");
  require_finite(lambda, "lambda");
  require_interval(a, b);
  if (!initial_profile_) throw ArgumentError("initial profile is empty");
  constexpr double kTol = 1e-10;
  const double fa = initial_profile_(a);
  const double fb = initial_profile_(b);
  if (!(std::abs(fa) <= kTol) || !(std::abs(fb) <= kTol))
    throw ArgumentError("initial profile must vanish at both ends (homogeneous Dirichlet)");
}

SolutionField::SolutionField(Mesh1D mesh, std::vector<double> nodal_values,
                             EnrichmentKind enrichment,
                             std::vector<std::vector<double>> bubble_coeffs)
    : mesh_(std::move(mesh)),
      nodal_values_(std::move(nodal_values)),
      enrichment_(enrichment),
      bubble_coeffs_(std::move(bubble_coeffs)) {
  if (nodal_values_.size() != mesh_.node_count())
    throw ArgumentError("nodal value count does not match mesh");
  if (enrichment_.is_linear()) {
    if (!bubble_coeffs_.empty()) throw ArgumentError("linear field carries no bubble coefficients");
    return;
  }
  if (bubble_coeffs_.size() != mesh_.element_count())
    throw ArgumentError("need one bubble coefficient vector per element");
  for (const auto& c : bubble_coeffs_) {
    if (c.size() != static_cast<std::size_t>(enrichment_.bubble_count()))
      throw ArgumentError("bubble coefficient vector has wrong length for enrichment order");
  }
}

SolutionField SolutionField::piecewise_linear(Mesh1D mesh, std::vector<double> nodal_values) {
  return SolutionField(std::move(mesh), std::move(nodal_values), EnrichmentKind::linear(), {});
}

std::span<const double> SolutionField::bubble_coeffs(std::size_t element) const {
  if (bubble_coeffs_.empty()) return {};
  return bubble_coeffs_.at(element);
}

double SolutionField::eval(double x) const {
  const std::size_t e = mesh_.locate(x);
  if (x == mesh_.node(e)) return nodal_values_[e];
  if (x == mesh_.node(e + 1)) return nodal_values_[e + 1];
  return eval_on_element(e, x);
}

double SolutionField::eval_on_element(std::size_t element, double x) const {
  const double x0 = mesh_.node(element);
  const double l = mesh_.length(element);
  const double s = x - x0;
  double u = (l - s) / l * nodal_values_[element] + s / l * nodal_values_[element + 1];
  // sum_k c_k s^k (l - s), Horner in s
  const auto c = bubble_coeffs(element);
  double poly = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) poly = (poly + c[k]) * s;
  return u + poly * (l - s);
}

double SolutionField::derivative_on_element(std::size_t element, double x) const {
  const double l = mesh_.length(element);
  const double s = x - mesh_.node(element);
  double du = (nodal_values_[element + 1] - nodal_values_[element]) / l;
  const auto c = bubble_coeffs(element);
  // d/ds [s^k (l - s)] = k l s^(k-1) - (k+1) s^k
  double sk_1 = 1.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    du += c[i] * (k * l * sk_1 - (k + 1.0) * sk_1 * s);
    sk_1 *= s;
  }
  return du;
}

double eval_field(const SolutionField& field, double x) { return field.eval(x); }

}  // namespace bubblefem
