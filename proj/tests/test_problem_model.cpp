#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "bubblefem/errors.hpp"
#include "bubblefem/problem_model.hpp"

using namespace bubblefem;

TEST(TransportCoefficients, RejectsNonFiniteAndNull) {
  EXPECT_NO_THROW(TransportCoefficients(-1.0, 0.0, 0.0));
  EXPECT_THROW(TransportCoefficients(std::nan(""), 0.0, 1.0), ArgumentError);
  EXPECT_THROW(TransportCoefficients(-1.0, std::numeric_limits<double>::infinity(), 1.0), ArgumentError);
  EXPECT_THROW(TransportCoefficients(0.0, 0.0, 0.0), ArgumentError);
}

TEST(Mesh1D, ValidatesNodes) {
  EXPECT_THROW(Mesh1D({0.0}), ArgumentError);
  EXPECT_THROW(Mesh1D({0.0, 1.0, 1.0}), ArgumentError);
  EXPECT_THROW(Mesh1D({0.0, 2.0, 1.0}), ArgumentError);
  const Mesh1D m({0.0, 0.5, 2.0});
  EXPECT_EQ(m.node_count(), 3u);
  EXPECT_EQ(m.element_count(), 2u);
  EXPECT_DOUBLE_EQ(m.length(1), 1.5);
}

TEST(Mesh1D, UniformMeshHitsEndpointExactly) {
  const Mesh1D m = uniform_mesh(0.0, std::numbers::pi, 7);
  EXPECT_EQ(m.element_count(), 7u);
  EXPECT_EQ(m.right(), std::numbers::pi);
  EXPECT_EQ(m.left(), 0.0);
  EXPECT_THROW(uniform_mesh(0.0, 1.0, 0), ArgumentError);
  EXPECT_THROW(uniform_mesh(1.0, 1.0, 3), ArgumentError);
}

TEST(Mesh1D, LocateConventions) {
  const Mesh1D m({0.0, 1.0, 2.0, 3.0});
  EXPECT_EQ(m.locate(0.0), 0u);
  EXPECT_EQ(m.locate(0.5), 0u);
  EXPECT_EQ(m.locate(1.0), 1u);  // interior node belongs to the element on its right
  EXPECT_EQ(m.locate(3.0), 2u);
  EXPECT_THROW(m.locate(-1e-12), DomainError);
  EXPECT_THROW(m.locate(3.0 + 1e-12), DomainError);
  EXPECT_THROW(m.locate(std::nan("")), DomainError);
}

TEST(EnrichmentKind, ParseAndName) {
  EXPECT_EQ(EnrichmentKind::parse("linear"), EnrichmentKind::linear());
  EXPECT_EQ(EnrichmentKind::parse("quadratic"), EnrichmentKind::quadratic_bubble());
  EXPECT_EQ(EnrichmentKind::parse("cubic").order(), 3);
  EXPECT_EQ(EnrichmentKind::parse("p5").order(), 5);
  EXPECT_EQ(EnrichmentKind::parse("polynomial:4").bubble_count(), 3);
  EXPECT_EQ(EnrichmentKind::parse("p1"), EnrichmentKind::linear());
  EXPECT_EQ(EnrichmentKind::polynomial_bubble(6).name(), "p6");
  EXPECT_THROW(EnrichmentKind::parse("quartic"), ArgumentError);
  EXPECT_THROW(EnrichmentKind::parse("p"), ArgumentError);
  EXPECT_THROW(EnrichmentKind::parse("p3x"), ArgumentError);
  EXPECT_THROW(EnrichmentKind::polynomial_bubble(1), ArgumentError);
}

TEST(SteadyProblem, NeedsOneDirichletEnd) {
  const TransportCoefficients op(-1.0, 0.0, 0.0);
  EXPECT_THROW(SteadyProblem(op, 0.0, 1.0, BoundaryCondition::neumann_flux(0.0), BoundaryCondition::neumann_flux(1.0)),
               IllPosedError);
  EXPECT_THROW(SteadyProblem(op, 1.0, 0.0, BoundaryCondition::dirichlet(0.0), BoundaryCondition::dirichlet(1.0)),
               ArgumentError);
  EXPECT_NO_THROW(SteadyProblem(op, 0.0, 1.0, BoundaryCondition::neumann_flux(2.0), BoundaryCondition::dirichlet(1.0)));
  EXPECT_THROW(BoundaryCondition::dirichlet(std::nan("")), ArgumentError);
}

TEST(TransientProblem, ProfileMustVanishAtEnds) {
  EXPECT_NO_THROW(TransientProblem(-1.0, 0.0, std::numbers::pi, [](double x) { return std::sin(x); }));
  EXPECT_THROW(TransientProblem(-1.0, 0.0, 1.0, [](double) { return 1.0; }), ArgumentError);
  EXPECT_THROW(TransientProblem(-1.0, 0.0, 1.0, nullptr), ArgumentError);
}

TEST(SolutionField, InterpolatesNodesAndEvaluatesBubble) {
  const Mesh1D m({0.0, 1.0, 3.0});
  const SolutionField f(m, {1.0, 2.0, -1.0}, EnrichmentKind::cubic_bubble(), {{0.5, -0.25}, {0.1, 0.2}});
  EXPECT_EQ(f.eval(0.0), 1.0);
  EXPECT_EQ(f.eval(1.0), 2.0);
  EXPECT_EQ(f.eval(3.0), -1.0);
  EXPECT_EQ(f.eval_on_element(0, 1.0), 2.0);
  // Element 1, s = 0.5, l = 2: linear 2*0.75 + (-1)*0.25 = 1.25; bubble (0.1*0.5 + 0.2*0.25)*1.5 = 0.15.
  EXPECT_NEAR(f.eval(1.5), 1.4, 1e-15);
  EXPECT_NEAR(eval_field(f, 1.5), 1.4, 1e-15);
}

TEST(SolutionField, DerivativeMatchesFiniteDifference) {
  const Mesh1D m({0.0, 2.0});
  const SolutionField f(m, {0.3, -0.7}, EnrichmentKind::polynomial_bubble(4), {{0.2, -0.3, 0.05}});
  for (double x : {0.1, 0.7, 1.3, 1.9}) {
    const double h = 1e-5;
    const double fd = (f.eval_on_element(0, x + h) - f.eval_on_element(0, x - h)) / (2 * h);
    EXPECT_NEAR(f.derivative_on_element(0, x), fd, 1e-8);
  }
}

TEST(SolutionField, ValidatesShapes) {
  const Mesh1D m({0.0, 1.0, 2.0});
  EXPECT_THROW(SolutionField::piecewise_linear(m, {1.0, 2.0}), ArgumentError);
  EXPECT_THROW(SolutionField(m, {0, 0, 0}, EnrichmentKind::linear(), {{1.0}, {1.0}}), ArgumentError);
  EXPECT_THROW(SolutionField(m, {0, 0, 0}, EnrichmentKind::quadratic_bubble(), {{1.0}}), ArgumentError);
  EXPECT_THROW(SolutionField(m, {0, 0, 0}, EnrichmentKind::quadratic_bubble(), {{1.0}, {1.0, 2.0}}), ArgumentError);
  EXPECT_TRUE(SolutionField::piecewise_linear(m, {0, 1, 2}).bubble_coeffs(0).empty());
}
