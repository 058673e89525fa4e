#include "dyncalc/restore.hpp"

#include <optional>
#include <vector>

#include "dyncalc/calculus.hpp"
#include "dyncalc/error.hpp"

namespace dyncalc {

namespace {

// Decomposes e as a*var + b with rational a, b; nullopt when not affine.
std::optional<std::pair<Rational, Rational>> affine_parts(const Expr& e, const std::string& var) {
    auto linear_term = [&](const Expr& t) -> std::optional<Rational> {
        if (t.kind() == Kind::Variable && t.name() == var) return Rational(1);
        if (t.kind() == Kind::Product && t.operands().size() == 2) {
            const Expr& c = t.operands()[0];
            const Expr& v = t.operands()[1];
            if (c.is_constant() && v.kind() == Kind::Variable && v.name() == var)
                return c.value();
        }
        return std::nullopt;
    };
    if (auto a = linear_term(e)) return std::make_pair(*a, Rational(0));
    if (e.is_constant()) return std::make_pair(Rational(0), e.value());
    if (e.kind() == Kind::Sum) {
        Rational a(0), b(0);
        for (const auto& t : e.operands()) {
            if (t.is_constant()) {
                b += t.value();
            } else if (auto c = linear_term(t)) {
                a += *c;
            } else {
                return std::nullopt;
            }
        }
        return std::make_pair(a, b);
    }
    return std::nullopt;
}

// Strips the additive rational constant so bases stay normalized.
Expr drop_constant_term(const Expr& e) {
    if (e.is_constant()) return constant(0);
    if (e.kind() != Kind::Sum) return e;
    std::vector<Expr> kept;
    kept.reserve(e.operands().size());
    for (const auto& t : e.operands())
        if (!t.is_constant()) kept.push_back(t);
    return sum(std::move(kept));
}

std::string fresh_var(const Expr& f, const std::string& stem) {
    std::string name = stem;
    int i = 1;
    while (f.mentions(name)) name = stem + std::to_string(i++);
    return name;
}

Expr restore_base(const Expr& f, const std::string& var);

// Affine change of variables; `f` is the whole integrand.
Expr restore_base_substituted(const Expr& f, const std::string& var, const Expr& inner) {
    auto ab = affine_parts(inner, var);
    if (!ab || ab->first.is_zero())
        throw NonAffineInner("inner expression " + inner.str() + " is not affine in " + var);
    const auto& [a, b] = *ab;
    std::string u = fresh_var(f, "u");
    // var = (u - b)/a turns f into a function of u alone
    Expr inverse = constant(Rational(1) / a) * (variable(u) - constant(b));
    Expr g = substitute(f, var, inverse);
    Expr base_u = restore_base(g, u);
    return constant(Rational(1) / a) * substitute(base_u, u, inner);
}

bool is_var(const Expr& e, const std::string& var) {
    return e.kind() == Kind::Variable && e.name() == var;
}

Expr restore_base(const Expr& f, const std::string& var) {
    // constants (in var) multiply the restoring variable
    if (!f.mentions(var)) return f * variable(var);

    switch (f.kind()) {
        case Kind::Sum: {
            std::vector<Expr> parts;
            parts.reserve(f.operands().size());
            for (const auto& t : f.operands()) parts.push_back(restore_base(t, var));
            return sum(std::move(parts));
        }
        case Kind::Product: {
            // split factors free of var from the rest
            std::vector<Expr> coeff, rest;
            for (const auto& k : f.operands())
                (k.mentions(var) ? rest : coeff).push_back(k);
            if (!coeff.empty()) {
                Expr core = product(std::vector<Expr>(rest));
                return product(std::move(coeff)) * restore_base(core, var);
            }
            throw NoRuleApplies("no rule restores the product " + f.str());
        }
        case Kind::Variable:
            return pow(variable(var), 2) * constant(Rational(1, 2));
        case Kind::Power: {
            const Expr& base = f.child();
            const Rational& e = f.exponent();
            if (is_var(base, var)) {
                if (e == Rational(-1)) return ln(variable(var));
                return pow(variable(var), e + Rational(1)) * constant(Rational(1) / (e + Rational(1)));
            }
            if (affine_parts(base, var)) return restore_base_substituted(f, var, base);
            throw NoRuleApplies("no rule restores the power " + f.str());
        }
        case Kind::Sin:
            if (is_var(f.child(), var)) return neg(cos(variable(var)));
            if (affine_parts(f.child(), var)) return restore_base_substituted(f, var, f.child());
            throw NoRuleApplies("no rule restores " + f.str());
        case Kind::Cos:
            if (is_var(f.child(), var)) return sin(variable(var));
            if (affine_parts(f.child(), var)) return restore_base_substituted(f, var, f.child());
            throw NoRuleApplies("no rule restores " + f.str());
        case Kind::Exp:
            if (is_var(f.child(), var)) return exp(variable(var));
            if (affine_parts(f.child(), var)) return restore_base_substituted(f, var, f.child());
            throw NoRuleApplies("no rule restores " + f.str());
        default:
            throw NoRuleApplies("no rule restores " + f.str());
    }
}

}  // namespace

Expr rewrite_squared_trig(const Expr& e) {
    switch (e.kind()) {
        case Kind::Constant:
        case Kind::Variable:
            return e;
        case Kind::Sin:
            return sin(rewrite_squared_trig(e.child()));
        case Kind::Cos:
            return cos(rewrite_squared_trig(e.child()));
        case Kind::Exp:
            return exp(rewrite_squared_trig(e.child()));
        case Kind::Ln:
            return ln(rewrite_squared_trig(e.child()));
        case Kind::Power: {
            Expr base = rewrite_squared_trig(e.child());
            if (e.exponent() == Rational(2)) {
                if (base.kind() == Kind::Sin)
                    return (constant(1) - cos(2 * base.child())) / constant(2);
                if (base.kind() == Kind::Cos)
                    return (constant(1) + cos(2 * base.child())) / constant(2);
            }
            return pow(std::move(base), e.exponent());
        }
        case Kind::Product: {
            std::vector<Expr> kids;
            kids.reserve(e.operands().size());
            for (const auto& k : e.operands()) kids.push_back(rewrite_squared_trig(k));
            return product(std::move(kids));
        }
        case Kind::Sum: {
            std::vector<Expr> kids;
            kids.reserve(e.operands().size());
            for (const auto& k : e.operands()) kids.push_back(rewrite_squared_trig(k));
            return sum(std::move(kids));
        }
    }
    return e;
}

PrimitiveFamily restore(const Expr& f, const std::string& var) {
    Expr rewritten = rewrite_squared_trig(f);
    Expr base = drop_constant_term(restore_base(rewritten, var));
    return PrimitiveFamily{base, var};
}

PrimitiveFamily restore_with_substitution(const Expr& f, const std::string& var,
                                          const Expr& inner) {
    Expr base = drop_constant_term(restore_base_substituted(rewrite_squared_trig(f), var, inner));
    return PrimitiveFamily{base, var};
}

FamilyReport verify_family(const PrimitiveFamily& p, const Expr& f) {
    FamilyReport r;
    r.derivative_of_base = static_derivative(p.base, p.var);
    r.structural_ok = r.derivative_of_base == f;
    r.max_abs_err =
        r.structural_ok ? 0.0 : max_abs_difference(r.derivative_of_base, f, 128);
    r.numeric_ok = r.structural_ok || r.max_abs_err <= 1e-9;
    r.rendered = p.str();
    return r;
}

}  // namespace dyncalc
