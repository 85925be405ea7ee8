#include "bubblefem/polynomial.hpp"

#include <algorithm>

namespace bubblefem {

ElementPolynomial::ElementPolynomial(std::vector<double> coefficients)
    : coeffs_(std::move(coefficients)) {}

ElementPolynomial::ElementPolynomial(std::initializer_list<double> coefficients)
    : coeffs_(coefficients) {}

ElementPolynomial ElementPolynomial::bubble(double l, int k) {
  std::vector<double> c(static_cast<std::size_t>(k) + 2, 0.0);
  c[static_cast<std::size_t>(k)] = l;
  c[static_cast<std::size_t>(k) + 1] = -1.0;
  return ElementPolynomial(std::move(c));
}

ElementPolynomial ElementPolynomial::linear_interpolant(double l, double u0, double ul) {
  return ElementPolynomial({u0, (ul - u0) / l});
}

double ElementPolynomial::operator()(double x) const {
  double v = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * x + *it;
  return v;
}

ElementPolynomial ElementPolynomial::derivative() const {
  if (coeffs_.size() <= 1) return ElementPolynomial({0.0});
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return ElementPolynomial(std::move(d));
}

double ElementPolynomial::integrate(double l) const {
  // sum_k c_k l^(k+1)/(k+1), Horner in l
  double v = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) v = v * l + coeffs_[k] / static_cast<double>(k + 1);
  return v * l;
}

ElementPolynomial& ElementPolynomial::operator+=(const ElementPolynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  return *this;
}

ElementPolynomial& ElementPolynomial::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

ElementPolynomial operator*(const ElementPolynomial& p, const ElementPolynomial& q) {
  if (p.coeffs_.empty() || q.coeffs_.empty()) return ElementPolynomial();
  std::vector<double> r(p.coeffs_.size() + q.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < q.coeffs_.size(); ++j) r[i + j] += p.coeffs_[i] * q.coeffs_[j];
  return ElementPolynomial(std::move(r));
}

double integrate_product(const ElementPolynomial& p, const ElementPolynomial& q, double l) {
  return (p * q).integrate(l);
}

}  // namespace bubblefem
