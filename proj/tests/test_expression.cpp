#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ktcy/errors.hpp"
#include "ktcy/expression.hpp"

using namespace ktcy;
using ktcy::expression::Expression;
using std::numbers::pi;

TEST_CASE("arithmetic and precedence") {
  CHECK(Expression::parse("1 + 2*3").evaluate(0, 0, 0) == 7.0);
  CHECK(Expression::parse("(1 + 2)*3").evaluate(0, 0, 0) == 9.0);
  CHECK(Expression::parse("-2 - -3").evaluate(0, 0, 0) == 1.0);
  CHECK(Expression::parse("8/4/2").evaluate(0, 0, 0) == 1.0);
  CHECK(Expression::parse("1.5e-1").evaluate(0, 0, 0) == 0.15);
  CHECK(Expression::parse("pi").evaluate(0, 0, 0) == pi);
  CHECK(Expression::parse("exp(log(2.5))").evaluate(0, 0, 0) == doctest::Approx(2.5));
  CHECK(Expression::parse("sin(2*pi*x)*cos(2*pi*y)").evaluate(0.25, 0.5, 0) == doctest::Approx(-1.0));
}

TEST_CASE("sampling matches the closed form") {
  const GridSpec g = GridSpec::cube(8);
  const ScalarField f = Expression::parse("0.3*sin(2*pi*x)*sin(2*pi*y)*sin(2*pi*t)").sample(g);
  const ScalarField ref = sample(
      [](double x, double y, double t) { return 0.3 * std::sin(2 * pi * x) * std::sin(2 * pi * y) * std::sin(2 * pi * t); }, g);
  CHECK(sup_norm(f - ref) < 1e-15);

  const GridSpec box(8, 8, 8, std::sqrt(2.0), std::sqrt(2.0), 1.0);
  CHECK_NOTHROW(Expression::parse("sin(2*pi*x/1.4142135623730951)").sample(box));
  CHECK_THROWS_AS(Expression::parse("sin(2*pi*x)").sample(box), ParseError);
  CHECK_NOTHROW(Expression::parse("cos(2*pi*(x + 2*y - t) + 0.3)").sample(g));
  CHECK_THROWS_AS(Expression::parse("cos(3*x)").sample(g), ParseError);
}

TEST_CASE("variables only as affine trig arguments") {
  CHECK_THROWS_AS(Expression::parse("x"), ParseError);
  CHECK_THROWS_AS(Expression::parse("exp(x)"), ParseError);
  CHECK_THROWS_AS(Expression::parse("sin(x*y)"), ParseError);
  CHECK_THROWS_AS(Expression::parse("sin(1/x)"), ParseError);
  CHECK_THROWS_AS(Expression::parse("sin(sin(x))"), ParseError);
  CHECK_NOTHROW(Expression::parse("sin(2*pi*x*2 - y*2*pi)"));
  CHECK_NOTHROW(Expression::parse("sin(exp(0)*2*pi*x)"));
}

TEST_CASE("syntax errors carry a position") {
  CHECK_THROWS_AS(Expression::parse(""), ParseError);
  CHECK_THROWS_AS(Expression::parse("1 +"), ParseError);
  CHECK_THROWS_AS(Expression::parse("sin 2"), ParseError);
  CHECK_THROWS_AS(Expression::parse("(1"), ParseError);
  CHECK_THROWS_AS(Expression::parse("1 2"), ParseError);
  CHECK_THROWS_AS(Expression::parse("tan(1)"), ParseError);
  try {
    Expression::parse("1 + foo");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("position 4") != std::string::npos);
  }
}

TEST_CASE("non-finite values are rejected when sampling") {
  CHECK_THROWS_AS(Expression::parse("log(sin(2*pi*x))").sample(GridSpec::cube(8)), NonFiniteValue);
}
