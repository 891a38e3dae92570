#include <cmath>

#include "doctest.h"
#include "tightlag/expression.hpp"
#include "tightlag/rng.hpp"

using namespace tightlag;

TEST_CASE("expression evaluation covers the grammar") {
  CHECK(Expression::parse("1 + 2*3").eval(0, 0) == 7.0);
  CHECK(Expression::parse("-u + v").eval(2, 5) == 3.0);
  CHECK(Expression::parse("2^3^1").eval(0, 0) == 8.0);
  CHECK(Expression::parse("cos(pi)").eval(0, 0) == doctest::Approx(-1.0));
  CHECK(Expression::parse("sqrt(u^2+v^2)").eval(3, 4) == doctest::Approx(5.0));
  CHECK(Expression::parse("sin(u)*cos(v) - u/v").eval(1.0, 2.0) ==
        doctest::Approx(std::sin(1.0) * std::cos(2.0) - 0.5));
  CHECK(Expression::parse("exp(log(u))").eval(2.5, 0) == doctest::Approx(2.5));
  CHECK(Expression::parse("(u + v)^2").eval(-3.0, 1.0) == doctest::Approx(4.0));
}

TEST_CASE("expression parse errors are reported") {
  CHECK_THROWS_AS(Expression::parse("1 +"), std::invalid_argument);
  CHECK_THROWS_AS(Expression::parse("foo(u)"), std::invalid_argument);
  CHECK_THROWS_AS(Expression::parse("w + 1"), std::invalid_argument);
  CHECK_THROWS_AS(Expression::parse("sin u"), std::invalid_argument);
  CHECK_THROWS_AS(Expression::parse("(1+2"), std::invalid_argument);
  CHECK_THROWS_AS(Expression::parse("1 2"), std::invalid_argument);
}

TEST_CASE("complex-step derivatives match hand derivatives") {
  const Expression e = Expression::parse("sin(2*u)*cos(v) + u^3*v - sqrt(1+u^2)");
  RngStream rng(41);
  for (int i = 0; i < 30; ++i) {
    const double u = rng.uniform(-2, 2), v = rng.uniform(-2, 2);
    const double du_expected =
        2 * std::cos(2 * u) * std::cos(v) + 3 * u * u * v - u / std::sqrt(1 + u * u);
    const double dv_expected = -std::sin(2 * u) * std::sin(v) + u * u * u;
    CHECK(e.du(u, v) == doctest::Approx(du_expected).epsilon(1e-13));
    CHECK(e.dv(u, v) == doctest::Approx(dv_expected).epsilon(1e-13));
  }
}

TEST_CASE("integer powers differentiate cleanly at negative bases") {
  const Expression e = Expression::parse("u^2 + v^4");
  CHECK(e.du(-0.5, 0.0) == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(e.dv(0.0, -2.0) == doctest::Approx(-32.0).epsilon(1e-13));
}
