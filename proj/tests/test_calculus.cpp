#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dyncalc/calculus.hpp"
#include "dyncalc/error.hpp"

using namespace dyncalc;

namespace {

double urand(std::mt19937& rng, double lo, double hi) {
    return lo + (static_cast<double>(rng()) / 4294967296.0) * (hi - lo);
}

}  // namespace

TEST_CASE("cubic dynamic differential keeps every expansion term") {
    auto dd = dynamic_differential(parse("x^3"), "x");
    CHECK(dd.exact);
    CHECK(dd.series.to_expr([&](int g) { return dd.generator_name(g); }) ==
          parse("3*x^2*dx + 3*x*dx^2 + dx^3"));
    CHECK(dd.static_part() == parse("3*x^2"));
    CHECK(dd.alpha.to_expr([&](int g) { return dd.generator_name(g); }) ==
          parse("3*x*dx + dx^2"));
    CHECK(dd.remainder.to_expr([&](int g) { return dd.generator_name(g); }) ==
          parse("3*x*dx^2 + dx^3"));
    // type invariant: series = static_part * dx + remainder
    Series rebuilt = add(Series::term(Mono::unit(1), dd.static_part()), dd.remainder);
    CHECK(same_terms(rebuilt, dd.series));
}

TEST_CASE("identity function has unit static part and vanishing alpha") {
    auto dd = dynamic_differential(parse("x"), "x");
    CHECK(dd.series.to_expr([&](int g) { return dd.generator_name(g); }) == parse("dx"));
    CHECK(dd.static_part() == constant(1));
    CHECK(dd.alpha.is_zero());
}

TEST_CASE("sine dynamic differential at K=3 matches the Taylor oracle") {
    auto dd = dynamic_differential(parse("sin(x)"), "x", 3);
    CHECK_FALSE(dd.exact);
    CHECK(dd.static_part() == parse("cos(x)"));
    // alpha = -(sin x / 2) dx - (cos x / 6) dx^2; cross-checked against the
    // classical derivative route below
    CHECK(dd.alpha.coefficient(Mono::unit(1)) == parse("-(1/2)*sin(x)"));
    CHECK(dd.alpha.coefficient(Mono::unit(1, 2)) == parse("-(1/6)*cos(x)"));
    for (int j = 1; j <= 3; ++j) {
        Expr expected = constant(Rational(1) / Rational::factorial(j)) *
                        nth_symbolic_derivative(parse("sin(x)"), "x", j);
        CHECK(dd.series.coefficient(Mono::unit(1, j)) == canonicalized(expected));
    }
}

TEST_CASE("static derivatives match the classical rules") {
    CHECK(static_derivative(parse("x^3"), "x") == parse("3*x^2"));
    CHECK(static_derivative(constant(7), "x") == constant(0));
    CHECK(static_derivative(parse("y"), "x") == constant(0));
    for (Rational e : {Rational(1), Rational(2), Rational(3), Rational(5), Rational(1, 2),
                       Rational(-2)}) {
        Expr lhs = static_derivative(pow(variable("x"), e), "x");
        Expr rhs = constant(e) * pow(variable("x"), e - Rational(1));
        CHECK(lhs == canonicalized(rhs));
    }
    CHECK(static_derivative(parse("x*sin(x)"), "x") == parse("sin(x) + x*cos(x)"));
    CHECK(static_derivative(parse("ln(x)"), "x") == parse("x^(-1)"));
    CHECK(static_derivative(parse("sin(x^2)"), "x") == parse("2*x*cos(x^2)"));
}

TEST_CASE("dynamic derivative keeps the generator terms") {
    CHECK(dynamic_derivative(parse("x^3"), "x") == parse("3*x^2 + 3*x*dx + dx^2"));
    CHECK(dynamic_derivative(parse("x"), "x") == constant(1));
    // brute-force oracle: ((x+e)^2 - x^2)/e == 2x + e
    CHECK(dynamic_derivative(parse("x^2"), "x") == parse("2*x + dx"));
    std::mt19937 rng(7);
    Expr dyn = dynamic_derivative(parse("x^2"), "x");
    for (int i = 0; i < 30; ++i) {
        double x = urand(rng, -3, 3), h = urand(rng, 1e-4, 0.5);
        double brute = (std::pow(x + h, 2) - x * x) / h;
        CHECK(evaluate(dyn, {{"x", x}, {"dx", h}}) == doctest::Approx(brute).epsilon(1e-9));
    }
}

TEST_CASE("second dynamic derivative of the cubic") {
    Expr f2 = nth_dynamic_derivative(parse("x^3"), "x", 2);
    CHECK(f2 == parse("6*x + 3*d1x + 3*d2x"));
    // generators -> 0 reproduces the classical second derivative
    Expr classical = substitute(substitute(f2, "d1x", constant(0)), "d2x", constant(0));
    CHECK(classical == parse("6*x"));
}

TEST_CASE("second dynamic derivative of x^4 against the double-difference oracle") {
    Expr f2 = nth_dynamic_derivative(parse("x^4"), "x", 2);
    Expr classical = substitute(substitute(f2, "d1x", constant(0)), "d2x", constant(0));
    CHECK(classical == parse("12*x^2"));
    // oracle: (F(x+u+v) - F(x+u) - F(x+v) + F(x)) / (u v)
    std::mt19937 rng(11);
    for (int i = 0; i < 30; ++i) {
        double x = urand(rng, -2, 2), u = urand(rng, 1e-3, 0.3), v = urand(rng, 1e-3, 0.3);
        auto F = [](double t) { return t * t * t * t; };
        double brute = (F(x + u + v) - F(x + u) - F(x + v) + F(x)) / (u * v);
        double got = evaluate(f2, {{"x", x}, {"d1x", u}, {"d2x", v}});
        CHECK(got == doctest::Approx(brute).epsilon(1e-8));
    }
    CHECK(f2 == parse("12*x^2 + 12*x*d1x + 12*x*d2x + 4*d1x^2 + 6*d1x*d2x + 4*d2x^2"));
}

TEST_CASE("nth dynamic derivative handles transcendental functions") {
    Expr f2 = nth_dynamic_derivative(parse("sin(x)"), "x", 2, 4);
    Expr classical = substitute(substitute(f2, "d1x", constant(0)), "d2x", constant(0));
    CHECK(classical == parse("-sin(x)"));
    // the restoring part mentions both generators
    CHECK(f2.mentions("d1x"));
    CHECK(f2.mentions("d2x"));
    CHECK_THROWS_AS(nth_dynamic_derivative(parse("sin(x)"), "x", 3, 2), ValidationError);
}

TEST_CASE("generators-to-zero reproduces classical derivatives across functions") {
    for (const char* text : {"x", "x^2", "x^3", "x^4", "sin(x)", "cos(x)", "exp(x)", "ln(x)",
                             "x*sin(x)", "sin(x)^2", "sin(x^2)"}) {
        Expr F = parse(text);
        for (int n = 1; n <= 2; ++n) {
            Expr dyn = nth_dynamic_derivative(F, "x", n, 4);
            Expr at_zero = dyn;
            for (int i = 1; i <= n; ++i)
                at_zero = substitute(at_zero, "d" + std::to_string(i) + "x", constant(0));
            CHECK(at_zero == nth_symbolic_derivative(F, "x", n));
        }
    }
}

TEST_CASE("generator symmetry of the exact second difference") {
    for (const char* text : {"x^2", "x^3", "x^4", "x^3 + 2*x"}) {
        Expr f2 = nth_dynamic_derivative(parse(text), "x", 2);
        Expr swapped = substitute(f2, "d1x", variable("tmpgen"));
        swapped = substitute(swapped, "d2x", variable("d1x"));
        swapped = substitute(swapped, "tmpgen", variable("d2x"));
        CHECK(swapped == f2);
    }
    Expr f3 = nth_dynamic_derivative(parse("x^4"), "x", 3);
    Expr swapped = substitute(f3, "d1x", variable("tmpgen"));
    swapped = substitute(swapped, "d3x", variable("d1x"));
    swapped = substitute(swapped, "tmpgen", variable("d3x"));
    CHECK(swapped == f3);
}

TEST_CASE("total dynamic differential of x*y") {
    auto dd = total_dynamic_differential(parse("x*y"), {"x", "y"});
    CHECK(dd.series.to_expr([&](int g) { return dd.generator_name(g); }) ==
          parse("y*dx + x*dy + dx*dy"));
    CHECK(dd.linear[0] == parse("y"));
    CHECK(dd.linear[1] == parse("x"));
    CHECK(dd.alpha.to_expr([&](int g) { return dd.generator_name(g); }) == parse("dx*dy"));
}

TEST_CASE("total dynamic differential of a linear function has zero alpha") {
    auto dd = total_dynamic_differential(parse("x + y"), {"x", "y"});
    CHECK(dd.series.to_expr([&](int g) { return dd.generator_name(g); }) == parse("dx + dy"));
    CHECK(dd.alpha.is_zero());
}

TEST_CASE("total differential linear parts equal the classical partials") {
    for (const char* text : {"x^2*y", "x*y + y^2", "sin(x)*y"}) {
        Expr F = parse(text);
        auto dd = total_dynamic_differential(F, {"x", "y"});
        CHECK(dd.linear[0] == symbolic_derivative(F, "x"));
        CHECK(dd.linear[1] == symbolic_derivative(F, "y"));
    }
    auto dd = total_dynamic_differential(parse("x^2*y"), {"x", "y"});
    CHECK(dd.linear[0] == parse("2*x*y"));
    CHECK(dd.linear[1] == parse("x^2"));
}

TEST_CASE("linearity of the dynamic differential") {
    Expr F = parse("x^3"), G = parse("sin(x)");
    Rational a(3, 2), b(-2);
    auto lhs = dynamic_differential(canonicalized(constant(a) * F + constant(b) * G), "x", 4);
    auto dF = dynamic_differential(F, "x", 4);
    auto dG = dynamic_differential(G, "x", 4);
    Series rhs = add(dF.series.scaled(constant(a)), dG.series.scaled(constant(b)));
    CHECK(same_terms(lhs.series, rhs));
}

TEST_CASE("exact Leibniz identity at the series level") {
    for (auto [ftext, gtext] : std::vector<std::pair<const char*, const char*>>{
             {"x^2", "x^3"}, {"sin(x)", "x^2"}, {"sin(x)", "cos(x)"}, {"x*sin(x)", "exp(x)"}}) {
        Expr F = parse(ftext), G = parse(gtext);
        auto dFG = dynamic_differential(canonicalized(F * G), "x", 3);
        auto dF = dynamic_differential(F, "x", 3);
        auto dG = dynamic_differential(G, "x", 3);
        Series rhs = add(add(dG.series.scaled(F), dF.series.scaled(G)), mul(dF.series, dG.series));
        CHECK(same_terms(dFG.series, rhs));
    }
}

TEST_CASE("oracle agreement: static derivative vs central finite differences") {
    std::mt19937 rng(2024);
    for (const char* text : {"x^3", "sin(x)", "exp(x)", "x*sin(x)", "sin(x^2)"}) {
        Expr F = parse(text);
        Expr d = static_derivative(F, "x");
        for (double h : {1e-3, 1e-4}) {
            double max_err = 0;
            for (int i = 0; i < 64; ++i) {
                double x = urand(rng, -2.5, 2.5);
                double fd = central_difference(F, "x", {{"x", x}}, h);
                double sym = evaluate(d, {{"x", x}});
                max_err = std::max(max_err, std::fabs(fd - sym));
            }
            // central differences are second order: error <= C h^2
            CHECK(max_err <= 300.0 * h * h);
        }
    }
}

TEST_CASE("vanishing remainder: |alpha(h)| <= C h") {
    std::mt19937 rng(5);
    for (const char* text : {"x^3", "x^4", "sin(x)", "exp(x)", "x*sin(x)"}) {
        auto dd = dynamic_differential(parse(text), "x", 4);
        for (int i = 0; i < 16; ++i) {
            double x = urand(rng, -2, 2);
            // sum of |coefficients| at x bounds alpha linearly in h for h <= 1
            double coeff_bound = 0;
            for (const auto& [m, c] : dd.alpha.terms())
                coeff_bound += std::fabs(evaluate(c, {{"x", x}}));
            for (double h : {1e-3, 1e-4, 1e-5}) {
                double a = dd.alpha.evaluate_at({{"x", x}}, {{1, h}});
                CHECK(std::fabs(a) <= (coeff_bound + 1.0) * h);
            }
        }
    }
}

TEST_CASE("chain comparison: both routes agree, inner alpha tracks nonlinearity") {
    auto r1 = chain_check(parse("y^2"), "y", parse("sin(t)"), "t");
    CHECK(r1.composition_static == parse("2*sin(t)*cos(t)"));
    CHECK(r1.product_route == parse("2*sin(t)*cos(t)"));
    CHECK(r1.verdict == "structural");
    CHECK_FALSE(r1.inner_alpha_zero);

    auto r2 = chain_check(parse("y"), "y", parse("t"), "t");
    CHECK(r2.composition_static == constant(1));
    CHECK(r2.inner_alpha_zero);

    auto r3 = chain_check(parse("y^3"), "y", parse("t^2"), "t");
    CHECK(r3.composition_static == parse("6*t^5"));
    CHECK(r3.product_route == parse("6*t^5"));
    // inner increment (t+dt)^2 - t^2 = 2t dt + dt^2, so alpha = dt
    CHECK(r3.inner_alpha.to_expr([](int) { return std::string("dt"); }) == parse("dt"));

    auto r4 = chain_check(parse("sin(y)"), "y", parse("t^2"), "t");
    CHECK(r4.verdict == "structural");
    CHECK_FALSE(r4.inner_alpha_zero);
}

TEST_CASE("symbolic derivative reference rules") {
    CHECK(symbolic_derivative(parse("x^3"), "x") == parse("3*x^2"));
    CHECK(symbolic_derivative(parse("sin(x)*cos(x)"), "x") ==
          parse("cos(x)^2 - sin(x)^2"));
    CHECK(symbolic_derivative(parse("exp(2*x)"), "x") == parse("2*exp(2*x)"));
    CHECK(symbolic_derivative(parse("ln(x^2)"), "x") == parse("2*x^(-1)"));
    CHECK(nth_symbolic_derivative(parse("x^4"), "x", 2) == parse("12*x^2"));
}

TEST_CASE("errors propagate: ln needs a nonzero base for composition") {
    // ln(x) dynamic differential works (constant term x is nonzero)
    CHECK(static_derivative(parse("ln(x)"), "x") == parse("x^(-1)"));
    // generator name collisions are rejected
    CHECK_THROWS_AS(dynamic_differential(parse("x + dx"), "x"), ValidationError);
    CHECK_THROWS_AS(dynamic_differential(parse("x"), "x", 0), ValidationError);
}
