#pragma once

#include <initializer_list>
#include <span>
#include <vector>

namespace bubblefem {

/// Dense power-basis polynomial c_0 + c_1 x + ... on the master element [0, l].
class ElementPolynomial {
 public:
  ElementPolynomial() = default;
  explicit ElementPolynomial(std::vector<double> coefficients);
  ElementPolynomial(std::initializer_list<double> coefficients);

  static ElementPolynomial constant(double value) { return ElementPolynomial({value}); }
  /// x^k (l - x)
  static ElementPolynomial bubble(double l, int k);
  /// (l - x)/l * u0 + x/l * ul
  static ElementPolynomial linear_interpolant(double l, double u0, double ul);

  std::span<const double> coefficients() const noexcept { return coeffs_; }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  double coefficient(std::size_t k) const noexcept { return k < coeffs_.size() ? coeffs_[k] : 0.0; }

  double operator()(double x) const;
  ElementPolynomial derivative() const;
  /// Exact integral over [0, l] via monomial antiderivatives.
  double integrate(double l) const;

  ElementPolynomial& operator+=(const ElementPolynomial& rhs);
  ElementPolynomial& operator*=(double s);
  friend ElementPolynomial operator+(ElementPolynomial lhs, const ElementPolynomial& rhs) {
    return lhs += rhs;
  }
  friend ElementPolynomial operator*(ElementPolynomial p, double s) { return p *= s; }
  friend ElementPolynomial operator*(double s, ElementPolynomial p) { return p *= s; }
  friend ElementPolynomial operator*(const ElementPolynomial& p, const ElementPolynomial& q);

 private:
  std::vector<double> coeffs_;
};

/// Exact value of the integral of p*q over [0, l].
double integrate_product(const ElementPolynomial& p, const ElementPolynomial& q, double l);

}  // namespace bubblefem
