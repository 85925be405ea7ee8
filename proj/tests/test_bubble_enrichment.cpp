#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bubblefem/bubble_enrichment.hpp"
#include "bubblefem/errors.hpp"
#include "oracles.hpp"

using namespace bubblefem;

namespace {

constexpr double kPi = std::numbers::pi;

// L applied to x^k (l - x) = l x^k - x^{k+1}, differentiated by hand.
double op_bubble(double eps, double kap, double lam, double l, int k, double x) {
  const double b = l * std::pow(x, k) - std::pow(x, k + 1);
  const double db = k * l * std::pow(x, k - 1) - (k + 1) * std::pow(x, k);
  const double d2b = (k >= 2 ? k * (k - 1) * l * std::pow(x, k - 2) : 0.0) - (k + 1) * k * std::pow(x, k - 1);
  return eps * d2b + kap * db + lam * b;
}

double op_linear(double kap, double lam, double l, double u0, double ul, double x) {
  return kap * (ul - u0) / l + lam * ((l - x) / l * u0 + x / l * ul);
}

// Normal equations assembled with Simpson and solved densely.
std::vector<double> oracle_bubble(double eps, double kap, double lam, double l, double u0, double ul, int order) {
  const int m = order - 1;
  std::vector<std::vector<double>> g(m, std::vector<double>(m));
  std::vector<double> rhs(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j)
      g[i][j] = oracle::simpson(
          [&](double x) { return op_bubble(eps, kap, lam, l, i + 1, x) * op_bubble(eps, kap, lam, l, j + 1, x); }, 0, l,
          4000);
    rhs[i] = -oracle::simpson(
        [&](double x) { return op_linear(kap, lam, l, u0, ul, x) * op_bubble(eps, kap, lam, l, i + 1, x); }, 0, l, 4000);
  }
  return oracle::dense_solve(g, rhs);
}

}  // namespace

TEST(ApplyOperator, MatchesHandDerivative) {
  const TransportCoefficients op(-0.7, 1.3, 2.1);
  for (int k = 1; k <= 4; ++k) {
    const auto p = apply_operator(op, ElementPolynomial::bubble(1.4, k));
    for (double x : {0.0, 0.3, 1.1, 1.4}) EXPECT_NEAR(p(x), op_bubble(-0.7, 1.3, 2.1, 1.4, k, x), 1e-12);
  }
}

TEST(ResidualFunctional, MatchesSimpsonOfSquaredResidual) {
  const TransportCoefficients op(-0.4, 0.9, 1.7);
  const std::vector<double> c{0.3, -0.8};
  const double l = 1.2, u0 = 0.5, ul = -1.1;
  const double j = residual_functional(op, l, u0, ul, c);
  const double ref = oracle::simpson(
      [&](double x) {
        const double r = op_linear(0.9, 1.7, l, u0, ul, x) + c[0] * op_bubble(-0.4, 0.9, 1.7, l, 1, x) +
                         c[1] * op_bubble(-0.4, 0.9, 1.7, l, 2, x);
        return r * r;
      },
      0, l);
  EXPECT_NEAR(j, ref, 1e-10 * ref);
  EXPECT_THROW(residual_functional(op, 0.0, u0, ul, c), ArgumentError);
  EXPECT_THROW(residual_functional(op, -1.0, u0, ul, c), ArgumentError);
}

TEST(LsBubble, AgreesWithIndependentNormalEquations) {
  oracle::Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const double eps = rng.uniform(-3, -0.05), kap = rng.uniform(-3, 3), lam = rng.uniform(0, 3);
    const double l = rng.uniform(0.2, 2.0), u0 = rng.uniform(-2, 2), ul = rng.uniform(-2, 2);
    const int order = 2 + trial % 3;
    const auto sol = ls_bubble(TransportCoefficients(eps, kap, lam), l, u0, ul, order);
    const auto ref = oracle_bubble(eps, kap, lam, l, u0, ul, order);
    ASSERT_EQ(sol.coeffs.size(), ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k)
      EXPECT_NEAR(sol.coeffs[k], ref[k], 1e-7 * (1.0 + std::abs(ref[k]))) << "trial " << trial << " k " << k;
  }
}

TEST(LsBubble, ScalarMinimumFoundByGoldenSection) {
  const TransportCoefficients op(-0.3, 0.5, 1.2);
  const double l = 0.9, u0 = 1.0, ul = 0.4;
  const double c = ls_bubble(op, l, u0, ul, 2).coeffs[0];
  const double g = oracle::golden_min(
      [&](double t) { return residual_functional(op, l, u0, ul, std::vector<double>{t}); }, -50, 50);
  EXPECT_NEAR(c, g, 1e-6);
}

TEST(LsBubble, BasisIsLinearInNodalData) {
  const TransportCoefficients op(-0.2, 1.5, 0.7);
  const auto basis = ls_bubble_basis(op, 1.3, 4);
  const auto sol = ls_bubble(op, 1.3, 0.6, -2.0, 4);
  for (std::size_t k = 0; k < 3; ++k)
    EXPECT_NEAR(sol.coeffs[k], 0.6 * basis.from_left[k] - 2.0 * basis.from_right[k], 1e-10 * (1 + std::abs(sol.coeffs[k])));
  EXPECT_THROW(ls_bubble(op, 1.3, 0, 1, 1), ArgumentError);
}

TEST(QuadraticClosedForms, MatchMinimiser) {
  oracle::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const TransportCoefficients op(rng.uniform(-10, -1e-3), rng.uniform(-10, 10), rng.uniform(0, 10));
    const double l = rng.uniform(0.01, 5), u0 = rng.uniform(-2, 2), ul = rng.uniform(-2, 2);
    const double c = ls_bubble(op, l, u0, ul, 2).coeffs[0];
    const auto ab = quadratic_ab(op, l);
    const double scale = std::abs(ab.a_coef - ab.b_coef) * std::abs(u0) + std::abs(ab.a_coef + ab.b_coef) * std::abs(ul);
    EXPECT_NEAR(ab.coefficient(u0, ul), c, 1e-10 * scale);
    EXPECT_NEAR(quadratic_coefficient(op, l, u0, ul), c, 1e-10 * scale);
  }
}

TEST(QuadraticClosedForms, PureConvectionHasNoSymmetricPart) {
  // A has factor lambda; B has factor eps*kappa.
  const auto ab = quadratic_ab(TransportCoefficients(-1.0, 2.0, 0.0), 0.5);
  EXPECT_EQ(ab.a_coef, 0.0);
  EXPECT_NE(ab.b_coef, 0.0);
  const auto sym = quadratic_ab(TransportCoefficients(-1.0, 0.0, 3.0), 0.5);
  EXPECT_EQ(sym.b_coef, 0.0);
}

TEST(TransientCoefficient, HeatLossValue) {
  const double c = transient_coefficient(-1.0, kPi / 2);
  EXPECT_NEAR(c, -0.2061634, 1e-7);
  EXPECT_NEAR(std::abs(c), 0.206, 5e-4);
  // Same as the least-squares coefficient with unit nodal sum.
  EXPECT_NEAR(c, ls_bubble(TransportCoefficients(-1.0, 0.0, 1.0), kPi / 2, 0.0, 1.0, 2).coeffs[0], 1e-14);
}

TEST(BenchmarkFactor, ReactionDiffusionValues) {
  EXPECT_NEAR(reaction_diffusion_benchmark_factor(1.0 / 3.0), -12.407, 5e-4);
  oracle::Rng rng(8);
  const TransportCoefficients op(-0.01, 0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double l = rng.uniform(0.01, 5.0);
    EXPECT_NEAR(quadratic_ab(op, l).a_coef, reaction_diffusion_benchmark_factor(l),
                1e-12 * std::abs(reaction_diffusion_benchmark_factor(l)));
  }
}

TEST(CubicCoefficients, EqualLsBubbleAndFlagPublishedMismatch) {
  const TransportCoefficients op(-0.3, 0.7, 1.3);
  CubicCrossCheck check;
  const auto sol = cubic_coefficients(op, 0.8, 1.0, 2.0, &check);
  const auto ref = ls_bubble(op, 0.8, 1.0, 2.0, 3);
  ASSERT_EQ(sol.coeffs.size(), 2u);
  EXPECT_NEAR(sol.coeffs[0], ref.coeffs[0], 1e-12 * std::abs(ref.coeffs[0]));
  EXPECT_NEAR(sol.coeffs[1], ref.coeffs[1], 1e-12 * std::abs(ref.coeffs[1]));
  EXPECT_NEAR(sol.coeffs[0], -2.3628, 1e-3);
  EXPECT_NEAR(sol.coeffs[1], -3.3025, 1e-3);
  EXPECT_TRUE(check.mismatch);
  EXPECT_GT(check.c_relative_deviation, 1e-8);
  EXPECT_NO_THROW(cubic_coefficients(op, 0.8, 1.0, 2.0));
}

TEST(Bubble2D, MinimisesTensorFunctional) {
  oracle::Rng rng(77);
  for (int i = 0; i < 10; ++i) {
    const double l = rng.uniform(0.2, 3), h = rng.uniform(0.2, 3);
    const RectCorners u{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const double c = bubble_2d_coefficient(l, h, u.u00, u.u0h, u.ul0, u.ulh);
    const double scale = std::abs(u.u00) + std::abs(u.u0h) + std::abs(u.ul0) + std::abs(u.ulh);
    const double g = oracle::golden_min([&](double t) { return residual_functional_2d(l, h, u, t); }, -100 * scale,
                                        100 * scale);
    EXPECT_NEAR(c, g, 1e-6 * (1 + std::abs(c)));
  }
}

TEST(Bubble2D, FunctionalAgainstNestedSimpson) {
  const double l = 1.3, h = 0.6, c = 0.4;
  const RectCorners u{0.2, -0.5, 1.1, 0.7};
  const auto residual = [&](double x, double y) {
    const double uy = (-u.u00 * (l - x) + u.u0h * (l - x) - u.ul0 * x + u.ulh * x) / (l * h) + c * x * (l - x) * (h - 2 * y);
    const double uxx = -2.0 * c * y * (h - y);
    return uxx - uy;
  };
  const double ref = oracle::simpson(
      [&](double x) { return oracle::simpson([&](double y) { const double r = residual(x, y); return r * r; }, 0, h, 200); },
      0, l, 200);
  EXPECT_NEAR(residual_functional_2d(l, h, u, c), ref, 1e-10 * ref);
  EXPECT_EQ(bubble_2d_coefficient(l, h, 0.3, 0.3, 0.3, 0.3), 0.0);
}

TEST(Degeneracy, UnderflowingGramIsReported) {
  const TransportCoefficients op(0.0, 0.0, 1.0);
  EXPECT_THROW(ls_bubble(op, 1e-70, 0.0, 1.0, 2), DegenerateOperatorError);
  EXPECT_THROW(quadratic_ab(op, 1e-70), DegenerateOperatorError);
  EXPECT_NO_THROW(ls_bubble(op, 1e-3, 0.0, 1.0, 2));
}

TEST(TransientCoefficient, VanishesWhenNumeratorDoes) {
  const double l = 0.9;
  EXPECT_NEAR(transient_coefficient(l * l / 12.0, l), 0.0, 1e-14);
}
