#include "bubblefem/bubble_enrichment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bubblefem/errors.hpp"
#include "bubblefem/quadrature.hpp"

namespace bubblefem {

namespace {

constexpr double kDegenerateTol = 1e-12;

void require_length(double l) {
  if (!(l > 0.0) || !std::isfinite(l)) throw ArgumentError("element length must be positive");
}

void require_order(int order) {
  if (order < 2) throw ArgumentError("bubble order must be >= 2, got " + std::to_string(order));
}

// Denominator with the magnitude of its largest constituent term.
struct ScaledSum {
  double value = 0.0;
  double largest = 0.0;
  void add(double term) {
    value += term;
    largest = std::max(largest, std::abs(term));
  }
  bool degenerate() const { return !(std::abs(value) > kDegenerateTol * largest); }
};

// Jacobi-scaled Cholesky solve of the SPD Gram system for several right-hand sides.
class GramSolver {
 public:
  explicit GramSolver(std::vector<std::vector<double>> gram) : n_(gram.size()), lower_(std::move(gram)) {
    scale_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (!(lower_[i][i] > 0.0) || !std::isfinite(lower_[i][i]))
        throw DegenerateOperatorError("bubble Gram matrix has a non-positive diagonal");
      scale_[i] = 1.0 / std::sqrt(lower_[i][i]);
    }
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) lower_[i][j] *= scale_[i] * scale_[j];
    for (std::size_t j = 0; j < n_; ++j) {
      double d = lower_[j][j];
      for (std::size_t k = 0; k < j; ++k) d -= lower_[j][k] * lower_[j][k];
      if (!(d > kDegenerateTol))
        throw DegenerateOperatorError("bubble Gram matrix is numerically singular (scaled pivot " +
                                      std::to_string(d) + ")");
      lower_[j][j] = std::sqrt(d);
      for (std::size_t i = j + 1; i < n_; ++i) {
        double s = lower_[i][j];
        for (std::size_t k = 0; k < j; ++k) s -= lower_[i][k] * lower_[j][k];
        lower_[i][j] = s / lower_[j][j];
      }
    }
  }

  std::vector<double> solve(std::vector<double> rhs) const {
    for (std::size_t i = 0; i < n_; ++i) rhs[i] *= scale_[i];
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = 0; k < i; ++k) rhs[i] -= lower_[i][k] * rhs[k];
      rhs[i] /= lower_[i][i];
    }
    for (std::size_t i = n_; i-- > 0;) {
      for (std::size_t k = i + 1; k < n_; ++k) rhs[i] -= lower_[k][i] * rhs[k];
      rhs[i] /= lower_[i][i];
    }
    for (std::size_t i = 0; i < n_; ++i) rhs[i] *= scale_[i];
    return rhs;
  }

 private:
  std::size_t n_;
  std::vector<std::vector<double>> lower_;
  std::vector<double> scale_;
};

// Images L b_k of the bubble basis and their Gram matrix.
struct NormalSystem {
  std::vector<ElementPolynomial> images;
  GramSolver solver;
};

NormalSystem build_normal_system(const TransportCoefficients& coeffs, double l, int order) {
  const auto n = static_cast<std::size_t>(order - 1);
  std::vector<ElementPolynomial> images;
  images.reserve(n);
  for (int k = 1; k < order; ++k) images.push_back(apply_operator(coeffs, ElementPolynomial::bubble(l, k)));
  std::vector<std::vector<double>> gram(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) gram[i][j] = gram[j][i] = integrate_product(images[i], images[j], l);
  return NormalSystem{std::move(images), GramSolver(std::move(gram))};
}

std::vector<double> solve_for(const NormalSystem& sys, const TransportCoefficients& coeffs, double l,
                              double u0, double ul) {
  const ElementPolynomial linear_residual =
      apply_operator(coeffs, ElementPolynomial::linear_interpolant(l, u0, ul));
  std::vector<double> rhs(sys.images.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -integrate_product(linear_residual, sys.images[i], l);
  return sys.solver.solve(std::move(rhs));
}

double relative_deviation(double reference, double value) {
  const double scale = std::max(std::abs(reference), 1e-300);
  return std::abs(value - reference) / scale;
}

}  // namespace

ElementPolynomial apply_operator(const TransportCoefficients& coeffs, const ElementPolynomial& poly) {
  const ElementPolynomial d1 = poly.derivative();
  const ElementPolynomial d2 = d1.derivative();
  return coeffs.epsilon() * d2 + coeffs.kappa() * d1 + coeffs.lambda() * poly;
}

ElementPolynomial residual_polynomial(const TransportCoefficients& coeffs, double l, double u0,
                                      double ul, std::span<const double> bubble_coeffs) {
  ElementPolynomial trial = ElementPolynomial::linear_interpolant(l, u0, ul);
  for (std::size_t k = 0; k < bubble_coeffs.size(); ++k)
    trial += bubble_coeffs[k] * ElementPolynomial::bubble(l, static_cast<int>(k) + 1);
  return apply_operator(coeffs, trial);
}

double residual_functional(const TransportCoefficients& coeffs, double l, double u0, double ul,
                           std::span<const double> bubble_coeffs) {
  require_length(l);
  const ElementPolynomial r = residual_polynomial(coeffs, l, u0, ul, bubble_coeffs);
  return integrate_product(r, r, l);
}

double residual_functional(const TransportCoefficients& coeffs, double l, double u0, double ul,
                           const BubbleSolution& bubble) {
  return residual_functional(coeffs, l, u0, ul, std::span<const double>(bubble.coeffs));
}

BubbleSolution ls_bubble(const TransportCoefficients& coeffs, double l, double u0, double ul, int order) {
  require_length(l);
  require_order(order);
  const NormalSystem sys = build_normal_system(coeffs, l, order);
  BubbleSolution out;
  out.order = order;
  out.coeffs = solve_for(sys, coeffs, l, u0, ul);
  out.residual_value = residual_functional(coeffs, l, u0, ul, out);
  return out;
}

BubbleBasis ls_bubble_basis(const TransportCoefficients& coeffs, double l, int order) {
  require_length(l);
  require_order(order);
  const NormalSystem sys = build_normal_system(coeffs, l, order);
  return BubbleBasis{order, solve_for(sys, coeffs, l, 1.0, 0.0), solve_for(sys, coeffs, l, 0.0, 1.0)};
}

EnrichmentAB quadratic_ab(const TransportCoefficients& coeffs, double l) {
  require_length(l);
  const double e = coeffs.epsilon();
  const double k = coeffs.kappa();
  const double r = coeffs.lambda();
  ScaledSum den;
  den.add(r * r * std::pow(l, 5));
  den.add(-20.0 * e * r * l * l * l);
  den.add(10.0 * k * k * l * l * l);
  den.add(120.0 * e * e * l);
  if (den.degenerate()) throw DegenerateOperatorError("quadratic bubble denominator vanishes");
  const double a = 2.5 * (-r * r * l * l * l + 12.0 * e * r * l) / den.value;
  const double b = 2.5 * (24.0 * e * k) / den.value;
  return EnrichmentAB{a, b, l};
}

double quadratic_coefficient(const TransportCoefficients& coeffs, double l, double u0, double ul) {
  const double e = coeffs.epsilon();
  const double k = coeffs.kappa();
  const double r = coeffs.lambda();
  quadratic_ab(coeffs, l);  // validates the denominator
  const double num = (-r * r * l * l * l + 12.0 * e * r * l) * (ul + u0) + 24.0 * e * k * (ul - u0);
  const double den = r * r * std::pow(l, 5) - 20.0 * e * r * l * l * l + 10.0 * k * k * l * l * l +
                     120.0 * e * e * l;
  return 2.5 * num / den;
}

double transient_coefficient(double epsilon, double l) {
  require_length(l);
  ScaledSum den;
  den.add(l * l * l * l);
  den.add(-20.0 * epsilon * l * l);
  den.add(120.0 * epsilon * epsilon);
  if (den.degenerate()) throw DegenerateOperatorError("transient bubble denominator vanishes");
  return -2.5 * (l * l - 12.0 * epsilon) / den.value;
}

double reaction_diffusion_benchmark_factor(double l) {
  require_length(l);
  const double l2 = l * l;
  return -25.0 * (25.0 * l2 + 3.0) / (250.0 * l2 * l2 + 50.0 * l2 + 3.0);
}

CubicClosedForm cubic_closed_form(const TransportCoefficients& coeffs, double l, double u0, double ul) {
  require_length(l);
  const double e = coeffs.epsilon();
  const double k = coeffs.kappa();
  const double r = coeffs.lambda();
  const double ui = ul;
  const auto p = [](double x, int n) { return std::pow(x, n); };
  const double den = p(l, 8) * p(r, 4) + 52.0 * p(l, 6) * r * r * (k * k - 2.0 * r * e) +
                     p(l, 4) * (4320.0 * r * r * e * e - 1680.0 * r * k * k * e + 420.0 * p(k, 4)) +
                     l * l * e * e * (5040.0 * k * k - 60480.0 * r * e) + 302400.0 * p(e, 4);
  if (den == 0.0) throw DegenerateOperatorError("cubic closed-form denominator vanishes");

  const double c1 = (p(l, 7) * p(r, 4) * (ui - 6.0 * u0) - 40.0 * p(l, 5) * p(r, 3) * e * (ui - 13.0 * u0) -
                     70.0 * p(l, 5) * r * r * k * k * (ui + 2.0 * u0) -
                     60.0 * p(l, 4) * r * r * k * e * (13.0 * ui + 22.0 * u0)) / den / l;
  const double c2 = (-840.0 * p(l, 3) * r * r * e * e * (5.0 * ui - 16.0 * u0) +
                     840.0 * p(l, 3) * r * e * k * k * (-ui + 4.0 * u0) +
                     5040.0 * l * l * e * e * k * r * (-ui + 6.0 * u0) +
                     2520.0 * l * l * p(k, 3) * e * (ui - u0)) / den;
  const double c3 = (50400.0 * l * r * p(e, 3) * (ui + 2.0 * u0) + 25200.0 * l * k * k * e * e * (ui - u0) +
                     151200.0 * k * p(e, 3) * (ui - u0)) / den;

  const double f1 = 7.0 / l *
                    (p(l, 6) * p(r, 4) * (-ui + u0) - 80.0 * p(l, 4) * p(r, 3) * e * (-ui + u0) +
                     10.0 * p(l, 4) * r * r * k * k * (-ui + u0) + 300.0 * p(l, 3) * r * r * k * e * (ui + u0)) /
                    den;
  const double f2 = (1320.0 * l * l * r * r * e * e * (-ui + u0) - 600.0 * l * l * r * e * k * k * (-ui + u0) -
                     3600.0 * l * e * e * k * r * (ui + u0) + 2520.0 * l * l * p(k, 3) * e * (ui - u0)) / den;
  const double f3 = (-7200.0 * l * r * p(e, 3) * (-ui + u0) + 7200.0 * k * k * e * e * (-ui + u0)) / den;

  return CubicClosedForm{c1 + c2 + c3, f1 + f2 + f3};
}

BubbleSolution cubic_coefficients(const TransportCoefficients& coeffs, double l, double u0, double ul,
                                  CubicCrossCheck* check) {
  BubbleSolution sol = ls_bubble(coeffs, l, u0, ul, 3);
  if (check != nullptr) {
    CubicCrossCheck report;
    try {
      report.closed = cubic_closed_form(coeffs, l, u0, ul);
      report.c_relative_deviation = relative_deviation(sol.coeffs[0], report.closed.c);
      report.f_relative_deviation = relative_deviation(sol.coeffs[1], report.closed.f);
    } catch (const DegenerateOperatorError&) {
      report.c_relative_deviation = report.f_relative_deviation = INFINITY;
    }
    report.mismatch = !(report.c_relative_deviation <= 1e-8 && report.f_relative_deviation <= 1e-8);
    *check = report;
  }
  return sol;
}

double bubble_2d_coefficient(double l, double h, double u00, double u0h, double ul0, double ulh) {
  require_length(l);
  require_length(h);
  return 15.0 * (u00 - u0h + ul0 - ulh) / (h * (l * l * l * l + 12.0 * h * h));
}

double residual_functional_2d(double l, double h, const RectCorners& u, double c) {
  require_length(l);
  require_length(h);
  // R has degree 2 in each variable, so R^2 has degree 4, integrated exactly per axis.
  static const QuadratureRule rule = gauss_rule(4);
  return integrate(
      rule,
      [&](double x) {
        return integrate(
            rule,
            [&](double y) {
              const double uxx = -2.0 * c * y * (h - y);
              const double uy = ((l - x) * (u.u0h - u.u00) + x * (u.ulh - u.ul0)) / (l * h) +
                                c * x * (l - x) * (h - 2.0 * y);
              const double r = uxx - uy;
              return r * r;
            },
            0.0, h);
      },
      0.0, l);
}

}  // namespace bubblefem
