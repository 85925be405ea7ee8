#include <gtest/gtest.h>

#include <cmath>

#include "bubblefem/errors.hpp"
#include "bubblefem/quadrature.hpp"
#include "oracles.hpp"

using namespace bubblefem;

TEST(GaussRule, NodesAreLegendreRoots) {
  for (int n = 1; n <= kMaxGaussPoints; ++n) {
    const auto rule = gauss_rule(n);
    const auto roots = oracle::legendre_roots(n);
    ASSERT_EQ(rule.points.size(), static_cast<std::size_t>(n));
    ASSERT_EQ(roots.size(), static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) EXPECT_NEAR(rule.points[i], roots[i], 1e-13) << "n=" << n;
  }
}

TEST(GaussRule, WeightsFormulaAndSymmetry) {
  for (int n = 1; n <= kMaxGaussPoints; ++n) {
    const auto rule = gauss_rule(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = rule.points[i];
      const double dp = oracle::legendre(n, x).second;
      EXPECT_NEAR(rule.weights[i], 2.0 / ((1 - x * x) * dp * dp), 1e-13);
      EXPECT_NEAR(rule.points[i], -rule.points[n - 1 - i], 1e-15);
      EXPECT_NEAR(rule.weights[i], rule.weights[n - 1 - i], 1e-15);
      sum += rule.weights[i];
    }
    EXPECT_NEAR(sum, 2.0, 1e-14);
    if (n % 2) EXPECT_EQ(rule.points[n / 2], 0.0);
  }
}

TEST(GaussRule, ExactUpToDegree2nMinus1) {
  for (int n = 1; n <= kMaxGaussPoints; ++n) {
    for (int d = 0; d <= 2 * n - 1; ++d) {
      const double exact = (std::pow(2.0, d + 1) - std::pow(-1.0, d + 1)) / (d + 1);
      EXPECT_NEAR(integrate([d](double x) { return std::pow(x, d); }, -1.0, 2.0, n), exact,
                  1e-12 * std::max(1.0, std::abs(exact)))
          << "n=" << n << " d=" << d;
    }
    // Degree 2n is not integrated exactly.
    const int d = 2 * n;
    const double exact = 2.0 / (d + 1);
    EXPECT_GT(std::abs(integrate([d](double x) { return std::pow(x, d); }, -1.0, 1.0, n) - exact), 1e-6);
  }
}

TEST(GaussRule, RejectsBadArguments) {
  EXPECT_THROW(gauss_rule(0), ArgumentError);
  EXPECT_THROW(gauss_rule(kMaxGaussPoints + 1), ArgumentError);
  EXPECT_THROW(integrate([](double) { return 1.0; }, 1.0, 1.0, 3), ArgumentError);
  EXPECT_THROW(integrate([](double) { return 1.0; }, 2.0, 1.0, 3), ArgumentError);
}

TEST(GaussRule, PrebuiltRuleOverloadAgrees) {
  const auto rule = gauss_rule(6);
  const auto f = [](double x) { return std::exp(x) * std::sin(3 * x); };
  EXPECT_DOUBLE_EQ(integrate(rule, f, 0.2, 1.7), integrate(f, 0.2, 1.7, 6));
  EXPECT_NEAR(integrate(rule, f, 0.2, 1.7), oracle::simpson(f, 0.2, 1.7), 1e-7);
}
