#include "dyncalc/expr.hpp"

#include <algorithm>
#include <sstream>

#include "dyncalc/error.hpp"

namespace dyncalc {

namespace {

// Positive integer powers of sums larger than this stay unexpanded.
constexpr long long kExpandLimit = 16;

std::shared_ptr<const Expr::Node> make_shared_node(Expr::Node&& n) {
    return std::make_shared<const Expr::Node>(std::move(n));
}

int cmp_rational(const Rational& a, const Rational& b) {
    auto c = a <=> b;
    if (c == std::strong_ordering::less) return -1;
    if (c == std::strong_ordering::greater) return 1;
    return 0;
}

}  // namespace

Expr make_node(Expr::Node&& n) { return Expr(make_shared_node(std::move(n))); }

Expr::Expr() {
    static const std::shared_ptr<const Node> zero = make_shared_node(Node{});
    node_ = zero;
}

int compare(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return 0;
    int ra = static_cast<int>(a.kind());
    int rb = static_cast<int>(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind()) {
        case Kind::Constant:
            return cmp_rational(a.value(), b.value());
        case Kind::Variable:
            return a.name().compare(b.name());
        case Kind::Sin:
        case Kind::Cos:
        case Kind::Exp:
        case Kind::Ln:
            return compare(a.child(), b.child());
        case Kind::Power: {
            int c = compare(a.child(), b.child());
            if (c != 0) return c;
            return cmp_rational(a.exponent(), b.exponent());
        }
        case Kind::Product:
        case Kind::Sum: {
            const auto& ka = a.operands();
            const auto& kb = b.operands();
            std::size_t n = std::min(ka.size(), kb.size());
            for (std::size_t i = 0; i < n; ++i) {
                int c = compare(ka[i], kb[i]);
                if (c != 0) return c;
            }
            if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
            return 0;
        }
    }
    return 0;
}

bool Expr::mentions(std::string_view var) const {
    switch (kind()) {
        case Kind::Constant:
            return false;
        case Kind::Variable:
            return name() == var;
        default:
            for (const auto& k : operands())
                if (k.mentions(var)) return true;
            return false;
    }
}

Expr constant(Rational v) {
    Expr::Node n;
    n.kind = Kind::Constant;
    n.value = std::move(v);
    return make_node(std::move(n));
}

Expr constant(long long v) { return constant(Rational(v)); }

Expr variable(std::string name) {
    Expr::Node n;
    n.kind = Kind::Variable;
    n.name = std::move(name);
    return make_node(std::move(n));
}

namespace {

Expr make_power_node(Expr base, Rational e) {
    Expr::Node n;
    n.kind = Kind::Power;
    n.value = std::move(e);
    n.kids = {std::move(base)};
    return make_node(std::move(n));
}

Expr make_nary_node(Kind kind, std::vector<Expr> kids) {
    Expr::Node n;
    n.kind = kind;
    n.kids = std::move(kids);
    return make_node(std::move(n));
}

// Splits a canonical non-sum term into (rational coefficient, key). The key
// of a pure constant is 1.
std::pair<Rational, Expr> coeff_split(const Expr& t) {
    if (t.kind() == Kind::Constant) return {t.value(), constant(1)};
    if (t.kind() == Kind::Product && t.operands().front().kind() == Kind::Constant) {
        const auto& kids = t.operands();
        Rational c = kids.front().value();
        if (kids.size() == 2) return {c, kids[1]};
        std::vector<Expr> rest(kids.begin() + 1, kids.end());
        return {c, make_nary_node(Kind::Product, std::move(rest))};
    }
    return {Rational(1), t};
}

// Reattaches a coefficient to a canonical key. Inputs canonical, coefficient
// nonzero, key != 1.
Expr coeff_attach(const Rational& c, const Expr& key) {
    if (c.is_one()) return key;
    std::vector<Expr> kids;
    if (key.kind() == Kind::Product) {
        kids.reserve(key.operands().size() + 1);
        kids.push_back(constant(c));
        kids.insert(kids.end(), key.operands().begin(), key.operands().end());
    } else {
        kids = {constant(c), key};
    }
    return make_nary_node(Kind::Product, std::move(kids));
}

}  // namespace

Expr sum(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    flat.reserve(terms.size());
    for (auto& t : terms) {
        if (t.kind() == Kind::Sum)
            flat.insert(flat.end(), t.operands().begin(), t.operands().end());
        else
            flat.push_back(std::move(t));
    }
    Rational const_total(0);
    std::map<Expr, Rational, ExprLess> by_key;
    for (const auto& t : flat) {
        if (t.kind() == Kind::Constant) {
            const_total += t.value();
            continue;
        }
        auto [c, key] = coeff_split(t);
        by_key[key] += c;
    }
    // Terms ordered by key (coefficient-stripped part); the map is already
    // sorted, and the pure constant sorts first.
    std::vector<Expr> out;
    out.reserve(by_key.size() + 1);
    if (!const_total.is_zero()) out.push_back(constant(const_total));
    for (const auto& [key, c] : by_key) {
        if (c.is_zero()) continue;
        out.push_back(coeff_attach(c, key));
    }
    if (out.empty()) return constant(0);
    if (out.size() == 1) return out.front();
    return make_nary_node(Kind::Sum, std::move(out));
}

Expr product(std::vector<Expr> factors) {
    Rational coeff(1);
    std::map<Expr, Rational, ExprLess> powers;  // base -> accumulated exponent
    std::vector<Expr> work = std::move(factors);
    while (!work.empty()) {
        Expr f = std::move(work.back());
        work.pop_back();
        switch (f.kind()) {
            case Kind::Constant:
                coeff *= f.value();
                break;
            case Kind::Product:
                work.insert(work.end(), f.operands().begin(), f.operands().end());
                break;
            case Kind::Power:
                powers[f.child()] += f.exponent();
                break;
            default:
                powers[f] += Rational(1);
                break;
        }
    }
    if (coeff.is_zero()) return constant(0);

    std::vector<Expr> rebuilt;
    std::vector<Expr> sums;  // factors that must distribute
    for (const auto& [base, e] : powers) {
        if (e.is_zero()) continue;
        Expr p = pow(base, e);
        switch (p.kind()) {
            case Kind::Constant:
                coeff *= p.value();
                if (coeff.is_zero()) return constant(0);
                break;
            case Kind::Sum:
                sums.push_back(std::move(p));
                break;
            case Kind::Product:
                for (const auto& k : p.operands()) {
                    if (k.kind() == Kind::Constant)
                        coeff *= k.value();
                    else
                        rebuilt.push_back(k);
                }
                if (coeff.is_zero()) return constant(0);
                break;
            default:
                rebuilt.push_back(std::move(p));
                break;
        }
    }

    if (!sums.empty()) {
        // Distribute the product over every sum factor.
        std::vector<std::vector<Expr>> combos{{}};
        for (const auto& s : sums) {
            std::vector<std::vector<Expr>> next;
            next.reserve(combos.size() * s.operands().size());
            for (const auto& c : combos)
                for (const auto& term : s.operands()) {
                    auto cc = c;
                    cc.push_back(term);
                    next.push_back(std::move(cc));
                }
            combos = std::move(next);
        }
        std::vector<Expr> terms;
        terms.reserve(combos.size());
        for (auto& c : combos) {
            c.push_back(constant(coeff));
            c.insert(c.end(), rebuilt.begin(), rebuilt.end());
            terms.push_back(product(std::move(c)));
        }
        return sum(std::move(terms));
    }

    if (rebuilt.empty()) return constant(coeff);
    std::sort(rebuilt.begin(), rebuilt.end(), ExprLess{});
    if (coeff.is_one()) {
        if (rebuilt.size() == 1) return rebuilt.front();
        return make_nary_node(Kind::Product, std::move(rebuilt));
    }
    std::vector<Expr> kids;
    kids.reserve(rebuilt.size() + 1);
    kids.push_back(constant(coeff));
    kids.insert(kids.end(), rebuilt.begin(), rebuilt.end());
    return make_nary_node(Kind::Product, std::move(kids));
}

Expr pow(Expr base, Rational exponent) {
    if (exponent.is_zero()) return constant(1);
    if (exponent.is_one()) return base;
    switch (base.kind()) {
        case Kind::Constant: {
            const Rational& c = base.value();
            if (exponent.is_integer()) return constant(c.pow_int(exponent.to_int()));
            if (c.is_zero()) {
                if (exponent < Rational(0)) throw DomainError("zero base with negative exponent");
                return constant(0);
            }
            if (c.is_one()) return constant(1);
            return make_power_node(std::move(base), std::move(exponent));
        }
        case Kind::Power: {
            Rational e = base.exponent() * exponent;
            return pow(base.child(), std::move(e));
        }
        case Kind::Product: {
            std::vector<Expr> fs;
            fs.reserve(base.operands().size());
            for (const auto& k : base.operands()) fs.push_back(pow(k, exponent));
            return product(std::move(fs));
        }
        case Kind::Sum: {
            if (exponent.is_integer() && exponent > Rational(1) &&
                exponent <= Rational(kExpandLimit)) {
                // Term-by-term distribution; going through product() would
                // re-merge the identical sum factors into this same power.
                long long k = exponent.to_int();
                std::vector<Expr> acc(base.operands().begin(), base.operands().end());
                for (long long i = 1; i < k; ++i) {
                    std::vector<Expr> next;
                    next.reserve(acc.size() * base.operands().size());
                    for (const auto& t : acc)
                        for (const auto& u : base.operands()) next.push_back(product({t, u}));
                    acc = std::move(next);
                }
                return sum(std::move(acc));
            }
            return make_power_node(std::move(base), std::move(exponent));
        }
        default:
            return make_power_node(std::move(base), std::move(exponent));
    }
}

Expr sin(Expr arg) {
    if (arg.is_zero()) return constant(0);
    Expr::Node n;
    n.kind = Kind::Sin;
    n.kids = {std::move(arg)};
    return make_node(std::move(n));
}

Expr cos(Expr arg) {
    if (arg.is_zero()) return constant(1);
    Expr::Node n;
    n.kind = Kind::Cos;
    n.kids = {std::move(arg)};
    return make_node(std::move(n));
}

Expr exp(Expr arg) {
    if (arg.is_zero()) return constant(1);
    Expr::Node n;
    n.kind = Kind::Exp;
    n.kids = {std::move(arg)};
    return make_node(std::move(n));
}

Expr ln(Expr arg) {
    if (arg.is_one()) return constant(0);
    Expr::Node n;
    n.kind = Kind::Ln;
    n.kids = {std::move(arg)};
    return make_node(std::move(n));
}

Expr neg(Expr e) { return product({constant(-1), std::move(e)}); }

Expr quotient(Expr num, Expr den) {
    return product({std::move(num), pow(std::move(den), Rational(-1))});
}

Expr canonicalized(const Expr& e) {
    switch (e.kind()) {
        case Kind::Constant:
            return constant(e.value());
        case Kind::Variable:
            return variable(e.name());
        case Kind::Sin:
            return sin(canonicalized(e.child()));
        case Kind::Cos:
            return cos(canonicalized(e.child()));
        case Kind::Exp:
            return exp(canonicalized(e.child()));
        case Kind::Ln:
            return ln(canonicalized(e.child()));
        case Kind::Power:
            return pow(canonicalized(e.child()), e.exponent());
        case Kind::Product: {
            std::vector<Expr> kids;
            kids.reserve(e.operands().size());
            for (const auto& k : e.operands()) kids.push_back(canonicalized(k));
            return product(std::move(kids));
        }
        case Kind::Sum: {
            std::vector<Expr> kids;
            kids.reserve(e.operands().size());
            for (const auto& k : e.operands()) kids.push_back(canonicalized(k));
            return sum(std::move(kids));
        }
    }
    return e;
}

Expr substitute(const Expr& e, std::string_view var, const Expr& replacement) {
    switch (e.kind()) {
        case Kind::Constant:
            return e;
        case Kind::Variable:
            return e.name() == var ? replacement : e;
        case Kind::Sin:
            return sin(substitute(e.child(), var, replacement));
        case Kind::Cos:
            return cos(substitute(e.child(), var, replacement));
        case Kind::Exp:
            return exp(substitute(e.child(), var, replacement));
        case Kind::Ln:
            return ln(substitute(e.child(), var, replacement));
        case Kind::Power:
            return pow(substitute(e.child(), var, replacement), e.exponent());
        case Kind::Product: {
            std::vector<Expr> kids;
            kids.reserve(e.operands().size());
            for (const auto& k : e.operands()) kids.push_back(substitute(k, var, replacement));
            return product(std::move(kids));
        }
        case Kind::Sum: {
            std::vector<Expr> kids;
            kids.reserve(e.operands().size());
            for (const auto& k : e.operands()) kids.push_back(substitute(k, var, replacement));
            return sum(std::move(kids));
        }
    }
    return e;
}

namespace {

void collect_vars(const Expr& e, std::set<std::string>& out) {
    if (e.kind() == Kind::Variable) {
        out.insert(e.name());
        return;
    }
    for (const auto& k : e.operands()) collect_vars(k, out);
}

}  // namespace

std::set<std::string> free_variables(const Expr& e) {
    std::set<std::string> out;
    collect_vars(e, out);
    return out;
}

// ---------------------------------------------------------------------------
// Canonical printer. Emits the same grammar parse() accepts.

namespace {

void print_expr(std::ostream& os, const Expr& e);

std::string rational_body(const Rational& r) {
    std::string s = r.numerator().str();
    if (!r.is_integer()) s += "/" + r.denominator().str();
    return s;
}

// Coefficient in multiplication position: integers bare, fractions wrapped.
void print_coefficient(std::ostream& os, const Rational& c) {
    if (c.is_integer())
        os << rational_body(c);
    else
        os << "(" << rational_body(c) << ")";
}

// (is_negative, magnitude) of a canonical non-sum term.
std::pair<bool, Expr> split_sign(const Expr& t) {
    if (t.kind() == Kind::Constant && t.value().is_negative())
        return {true, constant(-t.value())};
    if (t.kind() == Kind::Product) {
        const auto& head = t.operands().front();
        if (head.kind() == Kind::Constant && head.value().is_negative()) {
            Rational mag = -head.value();
            std::vector<Expr> rest(t.operands().begin() + 1, t.operands().end());
            Expr key = rest.size() == 1 ? rest.front() : make_nary_node(Kind::Product, std::move(rest));
            return {true, coeff_attach(mag, key)};
        }
    }
    return {false, t};
}

void print_power_base(std::ostream& os, const Expr& b) {
    bool bare = b.kind() == Kind::Variable || b.kind() == Kind::Sin || b.kind() == Kind::Cos ||
                b.kind() == Kind::Exp || b.kind() == Kind::Ln ||
                (b.kind() == Kind::Constant && b.value().is_nonneg_integer());
    if (bare) {
        print_expr(os, b);
    } else {
        os << "(";
        print_expr(os, b);
        os << ")";
    }
}

void print_factor(std::ostream& os, const Expr& f) {
    if (f.kind() == Kind::Sum) {
        os << "(";
        print_expr(os, f);
        os << ")";
    } else {
        print_expr(os, f);
    }
}

void print_product(std::ostream& os, const Expr& e) {
    auto [negv, mag] = split_sign(e);
    if (negv) os << "-";
    if (mag.kind() != Kind::Product) {
        print_factor(os, mag);
        return;
    }
    bool first = true;
    for (const auto& k : mag.operands()) {
        if (!first) os << "*";
        if (k.kind() == Kind::Constant)
            print_coefficient(os, k.value());
        else
            print_factor(os, k);
        first = false;
    }
}

void print_expr(std::ostream& os, const Expr& e) {
    switch (e.kind()) {
        case Kind::Constant: {
            if (e.value().is_negative()) os << "-";
            os << rational_body(e.value().abs());
            return;
        }
        case Kind::Variable:
            os << e.name();
            return;
        case Kind::Sin:
        case Kind::Cos:
        case Kind::Exp:
        case Kind::Ln: {
            const char* fn = e.kind() == Kind::Sin   ? "sin"
                             : e.kind() == Kind::Cos ? "cos"
                             : e.kind() == Kind::Exp ? "exp"
                                                     : "ln";
            os << fn << "(";
            print_expr(os, e.child());
            os << ")";
            return;
        }
        case Kind::Power: {
            print_power_base(os, e.child());
            os << "^";
            const Rational& x = e.exponent();
            if (x.is_nonneg_integer())
                os << rational_body(x);
            else
                os << "(" << rational_body(x) << ")";
            return;
        }
        case Kind::Product:
            print_product(os, e);
            return;
        case Kind::Sum: {
            bool first = true;
            for (const auto& t : e.operands()) {
                auto [negv, mag] = split_sign(t);
                if (first) {
                    if (negv) os << "-";
                } else {
                    os << (negv ? " - " : " + ");
                }
                if (mag.kind() == Kind::Product)
                    print_product(os, mag);
                else
                    print_factor(os, mag);
                first = false;
            }
            return;
        }
    }
}

}  // namespace

std::string Expr::str() const {
    std::ostringstream os;
    print_expr(os, *this);
    return os.str();
}

}  // namespace dyncalc
