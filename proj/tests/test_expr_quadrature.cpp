#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bic/expr.hpp"
#include "bic/geometry.hpp"
#include "bic/quadrature.hpp"

#include <cmath>

using namespace bic;

TEST_CASE("expr basics") {
  Expr e = Expr::compile("2*x + y^2 - 3", {"x", "y"});
  CHECK(e({1.0, 2.0}) == doctest::Approx(3.0));
  CHECK(e({0.0, 0.0}) == doctest::Approx(-3.0));

  Expr f = Expr::compile("-x^2", {"x"});
  CHECK(f({3.0}) == doctest::Approx(-9.0));  // unary minus binds after ^

  Expr g = Expr::compile("exp(log(x))", {"x"});
  CHECK(g({7.5}) == doctest::Approx(7.5));

  Expr h = Expr::compile("atan2(y, x) + hypot(x, y)", {"x", "y"});
  CHECK(h({1.0, 1.0}) == doctest::Approx(kPi / 4 + std::sqrt(2.0)));

  Expr c = Expr::compile("pi*e", {});
  CHECK(c({}) == doctest::Approx(kPi * std::exp(1.0)));

  Expr branch = Expr::compile("ifle(r, 1, 0, -2*log(r))", {"x", "y", "r"});
  CHECK(branch({0, 0, 0.5}) == doctest::Approx(0.0));
  CHECK(branch({0, 0, 2.0}) == doctest::Approx(-2 * std::log(2.0)));
}

TEST_CASE("expr errors") {
  CHECK_THROWS_AS(Expr::compile("2 +", {}), IoError);
  CHECK_THROWS_AS(Expr::compile("foo(1)", {}), IoError);
  CHECK_THROWS_AS(Expr::compile("x", {}), IoError);
  CHECK_THROWS_AS(Expr::compile("min(1)", {}), IoError);
}

TEST_CASE("gauss-legendre exact on polynomials") {
  const Quadrature& q = gauss_legendre(8);
  // degree 15 is the highest exact degree for an 8-point rule
  double val = q.integrate([](double t) { return std::pow(t, 15.0); });
  CHECK(val == doctest::Approx(1.0 / 16.0).epsilon(1e-13));
  double lin = q.integrate(2.0, 5.0, [](double t) { return t; });
  CHECK(lin == doctest::Approx(0.5 * (25.0 - 4.0)).epsilon(1e-13));
}

TEST_CASE("tanh-sinh handles the log endpoint singularity") {
  const Quadrature& q = tanh_sinh(64);
  double val = q.integrate([](double t) { return std::log(t); });
  CHECK(std::abs(val + 1.0) < 1e-12);
  // algebraic endpoint singularities resolve down to the double-precision
  // distance from the endpoint (~1e-16), so sqrt-type errors floor near 1e-8
  double root = q.integrate([](double t) { return 1.0 / std::sqrt(t); });
  CHECK(std::abs(root - 2.0) < 1e-7);
}

TEST_CASE("graded rule integrates r^(-1/2) against r dr") {
  double val = integrate_graded(0.0, 1.0, 48, 8,
                                [](double r) { return std::pow(r, -0.5) * kTwoPi * r; });
  CHECK(val == doctest::Approx(kTwoPi * 2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("sphere quadrature: area and a log-singular integrand") {
  Vec3 pole(0.3, -0.5, 0.8);
  pole.normalize();
  double area = sphere_integrate(pole, 64, [](const Vec3&) { return 1.0; });
  CHECK(area == doctest::Approx(4.0 * kPi).epsilon(1e-12));
  // int log(sin(d/2)) dA = -2 pi  (the identity behind the kernel constant)
  double logint = sphere_integrate(pole, 64, [&](const Vec3& y) {
    return std::log(std::sin(0.5 * sphere_angle(pole, y)));
  });
  CHECK(std::abs(logint + kTwoPi) < 1e-9);
}
