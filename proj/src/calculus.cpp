#include "dyncalc/calculus.hpp"

#include <cmath>

#include "dyncalc/error.hpp"

namespace dyncalc {

std::string generator_name(int index, const std::string& var, bool indexed) {
    return indexed ? "d" + std::to_string(index) + var : "d" + var;
}

std::string DynamicDifferential::generator_name(int gen) const {
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (gens[i] == gen) return gen_names[i];
    return "d" + std::to_string(gen);
}

Expr DynamicDifferential::dynamic_expr() const {
    Expr a = alpha.to_expr([this](int g) { return generator_name(g); });
    return static_part() + a;
}

bool polynomial_in(const Expr& e, const std::string& var) {
    switch (e.kind()) {
        case Kind::Constant:
        case Kind::Variable:
            return true;
        case Kind::Sin:
        case Kind::Cos:
        case Kind::Exp:
        case Kind::Ln:
            return !e.child().mentions(var);
        case Kind::Power:
            if (!e.child().mentions(var)) return true;
            return e.exponent().is_nonneg_integer() && polynomial_in(e.child(), var);
        case Kind::Product:
        case Kind::Sum:
            for (const auto& k : e.operands())
                if (!polynomial_in(k, var)) return false;
            return true;
    }
    return false;
}

namespace {

void check_generator_clash(const Expr& F, const std::string& gen_name) {
    if (F.mentions(gen_name))
        throw ValidationError("expression already uses generator name '" + gen_name + "'");
}

}  // namespace

DynamicDifferential dynamic_differential(const Expr& F, const std::string& var, int K) {
    if (K < 1) throw ValidationError("expansion order K must be >= 1");
    std::string gname = generator_name(1, var, false);
    check_generator_clash(F, gname);

    Series shift = add(Series::constant(variable(var)), Series::generator(1));
    if (!polynomial_in(F, var)) shift = shift.with_cap(1, K);

    Series expanded = lift(F, {{var, shift}}, K);
    Series series = sub(expanded, Series::constant(F));

    DynamicDifferential dd;
    dd.vars = {var};
    dd.gens = {1};
    dd.gen_names = {gname};
    dd.series = series;
    dd.linear = {series.coefficient(Mono::unit(1))};
    Series quotient = series.divided_by_generators(Mono::unit(1));
    dd.alpha = sub(quotient, Series::constant(dd.linear.front()));
    dd.remainder = mul(dd.alpha, Series::generator(1));
    dd.exact = series.exact();
    return dd;
}

Expr static_derivative(const Expr& F, const std::string& var) {
    // The linear coefficient is complete at any K >= 1.
    return dynamic_differential(F, var, 2).static_part();
}

Expr dynamic_derivative(const Expr& F, const std::string& var, int K) {
    return dynamic_differential(F, var, K).dynamic_expr();
}

Series nth_difference_series(const Expr& F, const std::string& var, int n, int K) {
    if (n < 1) throw ValidationError("derivative order n must be >= 1");
    bool poly = polynomial_in(F, var);
    if (!poly && K < n)
        throw ValidationError("truncated path needs K >= n");
    for (int i = 1; i <= n; ++i)
        check_generator_clash(F, generator_name(i, var, true));

    Series S;
    for (int i = 1; i <= n; ++i) {
        Series shift = add(Series::constant(variable(var)), Series::generator(i));
        if (!poly) shift = shift.with_cap(i, K);
        if (i == 1) {
            S = sub(lift(F, {{var, shift}}, K), Series::constant(F));
            continue;
        }
        // Shift var by the fresh generator inside every coefficient, then
        // difference against the previous step.
        Series shifted = S.shell();
        if (!poly) shifted = shifted.with_cap(i, K);
        for (const auto& [m, c] : S.terms()) {
            Series coeff_series = lift(c, {{var, shift}}, K);
            shifted = add(shifted, mul(coeff_series, Series::term(m, constant(1))));
        }
        S = sub(shifted, S);
    }
    return S;
}

Expr nth_dynamic_derivative(const Expr& F, const std::string& var, int n, int K) {
    Series S = nth_difference_series(F, var, n, K);
    Mono all;
    for (int i = 1; i <= n; ++i) all = all * Mono::unit(i);
    Series quotient = S.divided_by_generators(all);
    return quotient.to_expr([&](int g) { return generator_name(g, var, true); });
}

DynamicDifferential total_dynamic_differential(const Expr& F, const std::vector<std::string>& vars,
                                                int K) {
    if (vars.empty()) throw ValidationError("total differential needs at least one variable");
    if (K < 1) throw ValidationError("expansion order K must be >= 1");
    bool poly = true;
    for (const auto& v : vars) poly = poly && polynomial_in(F, v);

    DynamicDifferential dd;
    std::map<std::string, Series> bindings;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        int gen = static_cast<int>(i) + 1;
        std::string gname = generator_name(gen, vars[i], false);
        check_generator_clash(F, gname);
        Series shift = add(Series::constant(variable(vars[i])), Series::generator(gen));
        if (!poly) shift = shift.with_cap(gen, K);
        bindings.emplace(vars[i], std::move(shift));
        dd.vars.push_back(vars[i]);
        dd.gens.push_back(gen);
        dd.gen_names.push_back(gname);
    }

    Series expanded = lift(F, bindings, K);
    dd.series = sub(expanded, Series::constant(F));
    Series linear_sum;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        Expr a = dd.series.coefficient(Mono::unit(dd.gens[i]));
        dd.linear.push_back(a);
        linear_sum = add(linear_sum, Series::term(Mono::unit(dd.gens[i]), a));
    }
    // With several variables the remainder is kept whole; there is no single
    // generator to divide by.
    dd.remainder = sub(dd.series, linear_sum);
    dd.alpha = dd.remainder;
    dd.exact = dd.series.exact();
    return dd;
}

// --- classical reference derivative ------------------------------------------

Expr symbolic_derivative(const Expr& e, const std::string& var) {
    switch (e.kind()) {
        case Kind::Constant:
            return constant(0);
        case Kind::Variable:
            return e.name() == var ? constant(1) : constant(0);
        case Kind::Sin:
            return cos(e.child()) * symbolic_derivative(e.child(), var);
        case Kind::Cos:
            return neg(sin(e.child())) * symbolic_derivative(e.child(), var);
        case Kind::Exp:
            return exp(e.child()) * symbolic_derivative(e.child(), var);
        case Kind::Ln:
            return symbolic_derivative(e.child(), var) / e.child();
        case Kind::Power: {
            const Rational& r = e.exponent();
            return constant(r) * pow(e.child(), r - Rational(1)) *
                   symbolic_derivative(e.child(), var);
        }
        case Kind::Product: {
            const auto& ks = e.operands();
            std::vector<Expr> terms;
            terms.reserve(ks.size());
            for (std::size_t i = 0; i < ks.size(); ++i) {
                std::vector<Expr> fs;
                fs.reserve(ks.size());
                for (std::size_t j = 0; j < ks.size(); ++j)
                    fs.push_back(i == j ? symbolic_derivative(ks[j], var) : ks[j]);
                terms.push_back(product(std::move(fs)));
            }
            return sum(std::move(terms));
        }
        case Kind::Sum: {
            std::vector<Expr> terms;
            terms.reserve(e.operands().size());
            for (const auto& k : e.operands()) terms.push_back(symbolic_derivative(k, var));
            return sum(std::move(terms));
        }
    }
    return constant(0);
}

Expr nth_symbolic_derivative(const Expr& e, const std::string& var, int n) {
    Expr d = e;
    for (int i = 0; i < n; ++i) d = symbolic_derivative(d, var);
    return d;
}

double central_difference(const Expr& F, const std::string& var, const Bindings& at, double h) {
    Bindings hi = at, lo = at;
    hi[var] += h;
    lo[var] -= h;
    return (evaluate(F, hi) - evaluate(F, lo)) / (2.0 * h);
}

// --- chain comparison ---------------------------------------------------------

ChainReport chain_check(const Expr& outer, const std::string& outer_var, const Expr& inner,
                        const std::string& inner_var, int K, double tol) {
    ChainReport r;
    r.input = outer.str() + " with " + outer_var + " = " + inner.str();
    r.composition = substitute(outer, outer_var, inner);
    r.composition_static = static_derivative(r.composition, inner_var);
    Expr outer_d = symbolic_derivative(outer, outer_var);
    r.product_route = substitute(outer_d, outer_var, inner) * static_derivative(inner, inner_var);
    r.composition_dynamic = dynamic_derivative(r.composition, inner_var, K);

    DynamicDifferential inner_dd = dynamic_differential(inner, inner_var, K);
    r.inner_alpha = inner_dd.alpha;
    r.inner_alpha_zero = inner_dd.alpha.is_zero();

    r.structural_equal = r.composition_static == r.product_route;
    r.max_abs_err =
        r.structural_equal ? 0.0 : max_abs_difference(r.composition_static, r.product_route, 128);
    bool numeric_ok = r.structural_equal || r.max_abs_err <= tol;
    r.verdict = r.structural_equal ? "structural" : numeric_ok ? "numeric" : "mismatch";
    return r;
}

}  // namespace dyncalc
