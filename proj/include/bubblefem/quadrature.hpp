#pragma once

#include <functional>
#include <vector>

namespace bubblefem {

/// n-point Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree <= 2n - 1.
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
  int order = 0;
};

inline constexpr int kMaxGaussPoints = 10;

/// Nodes by Newton iteration on P_n from cosine initial guesses. 1 <= n <= 10.
QuadratureRule gauss_rule(int n);

/// Applies the affine image of gauss_rule(n) on [a, b].
double integrate(const std::function<double(double)>& fn, double a, double b, int n);

/// Same as above with a prebuilt rule; avoids recomputing nodes in inner loops.
template <class Fn>
double integrate(const QuadratureRule& rule, Fn&& fn, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q)
    sum += rule.weights[q] * fn(mid + half * rule.points[q]);
  return half * sum;
}

}  // namespace bubblefem
