#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dyncalc/error.hpp"
#include "dyncalc/expr.hpp"

using namespace dyncalc;

namespace {

Expr X() { return variable("x"); }

// Random canonical expression over {x, y}, used by the idempotence and
// round-trip properties.
Expr random_expr(std::mt19937& rng, int depth) {
    auto pick = [&](int n) { return static_cast<int>(rng() % n); };
    if (depth == 0) {
        switch (pick(3)) {
            case 0:
                return constant(Rational(pick(9) - 4, 1 + pick(4)));
            case 1:
                return variable("x");
            default:
                return variable("y");
        }
    }
    switch (pick(7)) {
        case 0:
            return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
        case 1:
            return random_expr(rng, depth - 1) * random_expr(rng, depth - 1);
        case 2:
            return random_expr(rng, depth - 1) - random_expr(rng, depth - 1);
        case 3:
            return pow(random_expr(rng, depth - 1), Rational(1 + pick(3)));
        case 4:
            return sin(random_expr(rng, depth - 1));
        case 5:
            return cos(random_expr(rng, depth - 1));
        default:
            return exp(random_expr(rng, depth - 1));
    }
}

}  // namespace

TEST_CASE("rational arithmetic stays reduced and exact") {
    Rational a(2, 4);
    CHECK(a.numerator() == 1);
    CHECK(a.denominator() == 2);
    Rational b(-3, -6);
    CHECK(b == Rational(1, 2));
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK((Rational(1, 3) * Rational(3, 5)) == Rational(1, 5));
    CHECK((Rational(1, 3) / Rational(2, 3)) == Rational(1, 2));
    CHECK(Rational(-5, 10).str() == "-1/2");
    CHECK(Rational(2).pow_int(10) == Rational(1024));
    CHECK(Rational(2, 3).pow_int(-2) == Rational(9, 4));
    CHECK_THROWS_AS(Rational(1, 0), DomainError);
    CHECK_THROWS_AS(Rational(0).pow_int(-1), DomainError);
    CHECK(Rational::factorial(6) == Rational(720));
}

TEST_CASE("parse grammar cases") {
    CHECK(parse("x^3") == pow(X(), 3));
    CHECK(parse("sin(x)^2") == pow(sin(X()), 2));
    // canonical form distributes the rational constant over the sum
    Expr e = parse("(1 - cos(2*x))/2");
    CHECK(e == Rational(1, 2) * constant(1) + Rational(-1, 2) * cos(2 * X()));
    CHECK(parse("x^(3/2)") == pow(X(), Rational(3, 2)));
    CHECK(parse("x^-2") == pow(X(), -2));
    CHECK(parse("x^(-2)") == pow(X(), -2));
    CHECK(parse("0.5*x") == Rational(1, 2) * X());
    CHECK(parse("-x") == neg(X()));
    CHECK(parse("2 + 3") == constant(5));
}

TEST_CASE("parse errors carry byte offsets") {
    CHECK_THROWS_AS(parse(""), SyntaxError);
    try {
        parse("x + * y");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.offset == 4);
    }
    try {
        parse("foo(x)");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.offset == 0);
    }
    CHECK_THROWS_AS(parse("x^2^3"), SyntaxError);
    CHECK_THROWS_AS(parse("(x"), SyntaxError);
}

TEST_CASE("canonicalization merges like terms and factors") {
    CHECK(parse("x + x") == 2 * X());
    CHECK(parse("x*x") == pow(X(), 2));
    CHECK(parse("x^2 * x^-2") == constant(1));
    CHECK(parse("x - x") == constant(0));
    CHECK(parse("2*x + 3*x - 5*x") == constant(0));
    CHECK(parse("(x+1)*(x+1)") == parse("x^2 + 2*x + 1"));
    CHECK(parse("(x+1)^2") == parse("x^2 + 2*x + 1"));
    CHECK(parse("x/x") == constant(1));
    CHECK(parse("(2*x)^2") == 4 * pow(X(), 2));
    CHECK(parse("x^(1/2)*x^(1/2)") == X());
    // quotients become negative powers, so reciprocals cancel
    CHECK(parse("x*(1+x)^-1*(1+x)") == X());
    CHECK(parse("sin(0)") == constant(0));
    CHECK(parse("cos(0)") == constant(1));
    CHECK(parse("exp(0)") == constant(1));
    CHECK(parse("ln(1)") == constant(0));
}

TEST_CASE("canonicalization is idempotent on random expressions") {
    std::mt19937 rng(12345);
    for (int i = 0; i < 300; ++i) {
        Expr e = random_expr(rng, 3);
        Expr c = canonicalized(e);
        CHECK(canonicalized(c) == c);
    }
}

TEST_CASE("print/parse round trip is stable") {
    std::mt19937 rng(777);
    for (int i = 0; i < 300; ++i) {
        Expr e = random_expr(rng, 3);
        Expr back = parse(e.str());
        CHECK(back == e);
        CHECK(back.str() == e.str());
    }
    // spot-check printed forms
    CHECK(parse("(1/2)*x - (1/4)*sin(2*x)").str() == "(1/2)*x - (1/4)*sin(2*x)");
    CHECK(parse("x^(-2)").str() == "x^(-2)");
    CHECK(parse("-x - 1").str() == "-1 - x");
}

TEST_CASE("evaluate basics") {
    CHECK(evaluate(parse("x^3"), {{"x", 2.0}}) == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(evaluate(parse("sin(x)^2 + cos(x)^2"), {{"x", 0.37}}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(evaluate(parse("(1/2)*x - (1/4)*sin(2*x)"), {{"x", 0.0}}) == 0.0);
    CHECK_THROWS_AS(evaluate(parse("1/x"), {{"x", 0.0}}), DomainError);
    CHECK_THROWS_AS(evaluate(parse("ln(x)"), {{"x", -1.0}}), DomainError);
    CHECK_THROWS_AS(evaluate(parse("x + y"), {{"x", 1.0}}), UnboundVariable);
    CHECK_THROWS_AS(evaluate(parse("x^(1/2)"), {{"x", -4.0}}), DomainError);
}

TEST_CASE("substitute replaces free occurrences and canonicalizes") {
    Expr shifted = substitute(parse("x^3"), "x", parse("x + h"));
    CHECK(shifted == parse("x^3 + 3*x^2*h + 3*x*h^2 + h^3"));
    CHECK(substitute(X(), "x", parse("x + h")) == parse("x + h"));
    CHECK(substitute(parse("sin(2*x)"), "x", parse("t^2")) == parse("sin(2*t^2)"));
}

TEST_CASE("evaluate respects substitution") {
    std::mt19937 rng(99);
    Expr g = parse("x^2 + 1");
    Expr e = parse("sin(x) + x^3");
    for (int i = 0; i < 50; ++i) {
        double xv = (static_cast<double>(rng()) / 4294967296.0) * 6.0 - 3.0;
        double direct = evaluate(substitute(e, "x", g), {{"x", xv}});
        double indirect = evaluate(e, {{"x", evaluate(g, {{"x", xv}})}});
        CHECK(direct == doctest::Approx(indirect).epsilon(1e-12));
    }
}

TEST_CASE("numeric_equal identities and separations") {
    CHECK(numeric_equal(parse("sin(x)^2"), parse("(1 - cos(2*x))/2"), 128, 1e-9));
    CHECK_FALSE(numeric_equal(parse("x"), parse("x + 1"), 128, 1e-9));
    CHECK(numeric_equal(parse("exp(ln(x))"), parse("x"), 128, 1e-9));
    CHECK(numeric_equal(parse("sin(2*x)"), parse("2*sin(x)*cos(x)"), 128, 1e-9));
}
