#include "test_support.hpp"

#include "vfkit/errors.hpp"
#include "vfkit/flow.hpp"
#include "vfkit/vectorfield.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace vfkit;
using vfkit::testing::field;

TEST_CASE("lie_bracket regressions") {
  CHECK(lie_bracket(field({"1", "0"}), field({"0", "x1"})) == field({"0", "1"}));
  CHECK(lie_bracket(field({"x1", "0"}), field({"0", "x2"})).is_zero());
  CHECK(lie_bracket(field({"x1*x3", "1", "0"}), field({"0", "0", "1"})) == field({"-x1", "0", "0"}));
  auto b = lie_bracket(field({"1", "0"}), field({"0", "x1^2"}));
  CHECK(b == field({"0", "2*x1"}));
  CHECK(lie_bracket(field({"1", "0"}), b) == field({"0", "2"}));
}

TEST_CASE("lie_bracket intersects domains and rejects stray divisions") {
  DomainPredicate u1({{1, Inequality::Relation::Less, make_rational(1)}});
  DomainPredicate u2({{1, Inequality::Relation::Greater, make_rational(-1)}});
  VectorField x1("X1", {Expr::constant(1), Expr{}}, u1);
  VectorField x2("X2", {Expr{}, Expr::constant(1)}, u2);
  auto b = lie_bracket(x1, x2);
  CHECK(b.domain().inequalities().size() == 2);
  CHECK(b.domain().contains(Point::exact({make_rational(0), make_rational(0)})));
  CHECK_FALSE(b.domain().contains(Point::exact({make_rational(2), make_rational(0)})));

  CHECK_THROWS_AS(lie_bracket(field({"1", "0"}), field({"0", "1/(x1^2+1)"})), NonSmooth);
}

TEST_CASE("property: antisymmetry, Jacobi, module Leibniz rule") {
  std::mt19937_64 rng(31337);
  for (int k = 0; k < 25; ++k) {
    auto x = testing::random_field(rng, 3, 2, "X");
    auto y = testing::random_field(rng, 3, 2, "Y");
    auto z = testing::random_field(rng, 3, 2, "Z");
    CHECK(lie_bracket(x, y) == lie_bracket(y, x).scaled(-1));
    auto jac = lie_bracket(x, lie_bracket(y, z)) + lie_bracket(z, lie_bracket(x, y)) +
               lie_bracket(y, lie_bracket(z, x));
    CHECK(jac.is_zero());
    Expr f = testing::random_polynomial(rng, 3, 2);
    CHECK(lie_bracket(x.times(f), y) == lie_bracket(x, y).times(f) - x.times(lie_derivative(y, f)));
  }
}

TEST_CASE("flows: closed forms") {
  Point p = Point::real({0.7, 0.0});
  Point q = flow(field({"x1", "0"}), 1.3, p);
  CHECK(q.values()[0] == doctest::Approx(0.7 * std::exp(1.3)).epsilon(1e-14));
  CHECK(q.values()[1] == 0.0);

  Point r = flow(field({"0", "1"}), -2.5, Point::real({3.0, 4.0}));
  CHECK(r.values()[0] == 3.0);
  CHECK(r.values()[1] == doctest::Approx(1.5));
}

TEST_CASE("flows: RK agrees with the matrix exponential for x' = Ax + bu") {
  // A = [[0,1],[0,0]], b = (0,1), u = 2: closed form x1 + x2 t + t^2, x2 + 2t.
  VectorField lin = field({"x2", "2"});
  FlowEngine exact({lin});
  CHECK(exact.is_affine(0));
  const double t = 0.8;
  auto y = exact.flow(0, t, std::vector<double>{0.3, -1.0});
  CHECK(y[0] == doctest::Approx(0.3 - 0.8 + 0.64).epsilon(1e-13));
  CHECK(y[1] == doctest::Approx(-1.0 + 1.6).epsilon(1e-13));

  VectorField disguised("N", {parse_expr("x2*exp(0*x1)", 2), parse_expr("2 + x1^2 - x1^2", 2)});
  CHECK(disguised == lin);
  // A 1e-20 perturbation is invisible at this tolerance but forces the integrator.
  VectorField quad("Q", {parse_expr("x2 + 1/100000000000000000000*exp(x1)", 2), parse_expr("2", 2)});
  FlowEngine rk({quad});
  CHECK_FALSE(rk.is_affine(0));
  auto z = rk.flow(0, t, std::vector<double>{0.3, -1.0});
  CHECK(std::fabs(z[0] - y[0]) < 1e-10);
  CHECK(std::fabs(z[1] - y[1]) < 1e-10);
}

TEST_CASE("flows: group law on the affine corpus") {
  std::vector<VectorField> fam = {field({"x1", "0"}), field({"0", "x2"}), field({"x2", "1"}),
                                  field({"-x2", "x1"}), field({"1", "-2"})};
  FlowEngine engine(fam);
  std::vector<double> p{0.4, -0.9};
  for (std::size_t i = 0; i < fam.size(); ++i) {
    for (auto [s, t] : {std::pair{0.3, 0.4}, std::pair{-0.7, 0.2}, std::pair{1.1, -1.6}}) {
      auto a = engine.apply(FlowWord{{{i, s}, {i, t}}}, p);
      auto b = engine.apply(FlowWord{{{i, s + t}}}, p);
      CHECK(std::fabs(a[0] - b[0]) < 1e-9);
      CHECK(std::fabs(a[1] - b[1]) < 1e-9);
    }
  }
}

TEST_CASE("flows: domain exit is an error with the failing step") {
  DomainPredicate u1({{1, Inequality::Relation::Less, make_rational(1)}});
  std::vector<VectorField> fam = {VectorField("X1", {Expr::constant(1), Expr{}}, u1),
                                  coordinate_field(2, 2, "X2")};
  FlowEngine engine(fam);
  CHECK_NOTHROW(engine.apply(FlowWord{{{0, 0.5}}}, std::vector<double>{0.0, 0.0}));
  try {
    engine.apply(FlowWord{{{1, 0.3}, {0, 2.0}}}, std::vector<double>{0.0, 0.0});
    FAIL("expected a domain exit");
  } catch (const DomainExit& e) {
    CHECK(e.step() == 1);
    CHECK(e.time() == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(engine.flow(0, 0.1, std::vector<double>{2.0, 0.0}), DomainExit);
}

TEST_CASE("flows: blow-up is reported") {
  FlowEngine engine({field({"x1^2", "0"})});
  CHECK_THROWS_AS(engine.flow(0, 2.0, std::vector<double>{1.0, 0.0}), IntegrationError);
}

TEST_CASE("pushforward along words") {
  std::vector<VectorField> fam = {field({"1", "0"}), field({"0", "x1"})};
  FlowEngine engine(fam);
  std::vector<double> p{0.0, 0.0};
  auto v0 = engine.pushforward(FlowWord{}, fam[1], std::vector<double>{0.5, 1.0});
  CHECK(v0(0) == 0.0);
  CHECK(v0(1) == 0.5);

  auto v1 = engine.pushforward(FlowWord{{{0, 0.7}}}, field({"0", "1"}), p);
  CHECK(v1(0) == 0.0);
  CHECK(v1(1) == 1.0);

  // (Phi^{d1}_t)_* (x1 d2) at 0 equals -t d2.
  const double t = 0.3;
  auto v2 = engine.pushforward(FlowWord{{{0, t}}}, fam[1], p);
  CHECK(v2(0) == doctest::Approx(0.0));
  CHECK(v2(1) == doctest::Approx(-t));
}

TEST_CASE("finite-difference bracket oracle") {
  // [Y, X](x) = d/dt|0 (Phi^X_t)_* Y (x); central differences on the pushforward.
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> coord(-0.6, 0.6);
  int checked = 0;
  for (int k = 0; k < 20; ++k) {
    auto x = testing::random_field(rng, 2, 2, "X");
    auto y = testing::random_field(rng, 2, 2, "Y");
    FlowEngine engine({x});
    auto br = lie_bracket(y, x);
    for (int j = 0; j < 5; ++j) {
      std::vector<double> p{coord(rng), coord(rng)};
      const double h = 1e-3;
      auto push = [&](double t) { return engine.pushforward(FlowWord{{{0, t}}}, y, p); };
      // Fourth-order central difference.
      Eigen::VectorXd fd = (8.0 * (push(h) - push(-h)) - (push(2 * h) - push(-2 * h))) / (12 * h);
      Eigen::VectorXd exact = evaluate_numeric(br, p);
      CHECK((fd - exact).norm() <= 1e-6 * std::max(1.0, exact.norm()));
      ++checked;
    }
  }
  CHECK(checked == 100);
}
