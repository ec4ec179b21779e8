#include <doctest.h>

#include <cmath>

#include "gel/expression.hpp"

using gel::Expression;

TEST_CASE("expression evaluation") {
    CHECK(Expression::parse("1 + 2*3")(0) == 7.0);
    CHECK(Expression::parse("2^3^2")(0) == 512.0);
    CHECK(Expression::parse("-x^2")(3.0) == -9.0);
    CHECK(Expression::parse("sin(x)*cos(t) + y")(0.3, 2.0, 0.7) == doctest::Approx(std::sin(0.3) * std::cos(0.7) + 2.0));
    CHECK(Expression::parse("sqrt(exp(2*x)) - tanh(0)")(1.5) == doctest::Approx(std::exp(1.5)));
    CHECK(Expression::parse("pi/2")(0) == doctest::Approx(M_PI / 2));
}

TEST_CASE("expression errors carry a column") {
    CHECK_THROWS_WITH_AS(Expression::parse("1 + foo(x)"), doctest::Contains("column 5"), gel::ExpressionError);
    CHECK_THROWS_AS(Expression::parse("(x"), gel::ExpressionError);
    CHECK_THROWS_AS(Expression::parse("x $"), gel::ExpressionError);
    CHECK_THROWS_AS(Expression::parse(""), gel::ExpressionError);
}

TEST_CASE("symbolic derivatives match finite differences") {
    const Expression e = Expression::parse("sin(2*x)*exp(-t) + x^3*y/(1 + y^2) + tanh(x*t)");
    const double x = 0.4, y = 0.7, t = 0.3, h = 1e-6;
    CHECK(e.derivative(Expression::Var::x)(x, y, t) ==
          doctest::Approx((e(x + h, y, t) - e(x - h, y, t)) / (2 * h)).epsilon(1e-7));
    CHECK(e.derivative(Expression::Var::y)(x, y, t) ==
          doctest::Approx((e(x, y + h, t) - e(x, y - h, t)) / (2 * h)).epsilon(1e-7));
    CHECK(e.derivative(Expression::Var::t)(x, y, t) ==
          doctest::Approx((e(x, y, t + h) - e(x, y, t - h)) / (2 * h)).epsilon(1e-7));
    CHECK_THROWS_AS(Expression::parse("2^x").derivative(Expression::Var::x), gel::ExpressionError);
}

TEST_CASE("adding a constant leaves the time derivative bit identical") {
    const Expression a = Expression::parse("0.1*sin(x)*t");
    const Expression b = Expression::parse("0.1*sin(x)*t + 3.5");
    for (double x : {0.1, 1.3, 4.0})
        CHECK(a.derivative(Expression::Var::t)(x, 0, 0.2) == b.derivative(Expression::Var::t)(x, 0, 0.2));
    CHECK(Expression::parse("3 + 4").is_constant());
}

TEST_CASE("expressions compose arithmetically") {
    const Expression x = Expression::variable(Expression::Var::x);
    const Expression e = Expression::parse("sin(x)") * x + Expression::constant(2.0) / (x - Expression::constant(1.0));
    CHECK(e(0.5) == doctest::Approx(std::sin(0.5) * 0.5 + 2.0 / (0.5 - 1.0)));
    CHECK((-exp(x))(1.0) == doctest::Approx(-std::exp(1.0)));
    CHECK((x * Expression::constant(0.0)).is_constant());
    CHECK(e.derivative(Expression::Var::x)(0.5) ==
          doctest::Approx(std::cos(0.5) * 0.5 + std::sin(0.5) - 2.0 / 0.25));
}
