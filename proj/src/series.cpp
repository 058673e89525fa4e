#include "dyncalc/series.hpp"

#include <algorithm>
#include <cmath>

#include "dyncalc/error.hpp"

namespace dyncalc {

// --- Mono -------------------------------------------------------------------

Mono Mono::unit(int gen, int exponent) {
    Mono m;
    if (exponent != 0) m.degs_ = {{gen, exponent}};
    return m;
}

int Mono::degree(int gen) const {
    for (const auto& [g, e] : degs_)
        if (g == gen) return e;
    return 0;
}

int Mono::total_degree() const {
    int t = 0;
    for (const auto& [g, e] : degs_) t += e;
    return t;
}

Mono Mono::operator*(const Mono& o) const {
    Mono r;
    auto a = degs_.begin();
    auto b = o.degs_.begin();
    while (a != degs_.end() || b != o.degs_.end()) {
        if (b == o.degs_.end() || (a != degs_.end() && a->first < b->first)) {
            r.degs_.push_back(*a++);
        } else if (a == degs_.end() || b->first < a->first) {
            r.degs_.push_back(*b++);
        } else {
            r.degs_.emplace_back(a->first, a->second + b->second);
            ++a;
            ++b;
        }
    }
    return r;
}

std::optional<Mono> Mono::divided_by(const Mono& o) const {
    Mono r;
    auto a = degs_.begin();
    for (const auto& [g, e] : o.degs_) {
        while (a != degs_.end() && a->first < g) r.degs_.push_back(*a++);
        if (a == degs_.end() || a->first != g || a->second < e) return std::nullopt;
        if (a->second > e) r.degs_.emplace_back(g, a->second - e);
        ++a;
    }
    while (a != degs_.end()) r.degs_.push_back(*a++);
    return r;
}

bool operator<(const Mono& a, const Mono& b) {
    int ta = a.total_degree(), tb = b.total_degree();
    if (ta != tb) return ta < tb;
    return a.degs_ < b.degs_;
}

// --- Series -----------------------------------------------------------------

Series Series::constant(Expr c) {
    Series s;
    if (!c.is_zero()) s.terms_.emplace(Mono{}, std::move(c));
    return s;
}

Series Series::generator(int gen) { return term(Mono::unit(gen), dyncalc::constant(1)); }

Series Series::term(Mono m, Expr coeff) {
    Series s;
    if (!coeff.is_zero()) s.terms_.emplace(std::move(m), std::move(coeff));
    return s;
}

bool Series::has_generator_terms() const {
    for (const auto& [m, c] : terms_)
        if (!m.is_constant()) return true;
    return false;
}

std::set<int> Series::generators() const {
    std::set<int> out;
    for (const auto& [m, c] : terms_)
        for (const auto& [g, e] : m.entries()) out.insert(g);
    for (const auto& [g, cap] : caps_) out.insert(g);
    return out;
}

Expr Series::coefficient(const Mono& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Expr{} : it->second;
}

bool Series::within_caps(const Mono& m) const {
    for (const auto& [g, cap] : caps_)
        if (m.degree(g) > cap) return false;
    return true;
}

void Series::accumulate(const Mono& m, const Expr& coeff) {
    if (coeff.is_zero()) return;
    if (!within_caps(m)) {
        exact_ = false;
        return;
    }
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, coeff);
        return;
    }
    Expr merged = it->second + coeff;
    if (merged.is_zero())
        terms_.erase(it);
    else
        it->second = merged;
}

Series Series::with_cap(int gen, int cap) const {
    Series r;
    r.caps_ = caps_;
    auto it = r.caps_.find(gen);
    if (it == r.caps_.end())
        r.caps_.emplace(gen, cap);
    else
        it->second = std::min(it->second, cap);
    r.exact_ = exact_;
    for (const auto& [m, c] : terms_) r.accumulate(m, c);
    return r;
}

Series Series::shell() const {
    Series r;
    r.caps_ = caps_;
    r.exact_ = exact_;
    return r;
}

Series Series::marked_inexact() const {
    Series r = *this;
    r.exact_ = false;
    return r;
}

Series Series::truncated_to_total_degree(int K) const {
    Series r = shell();
    for (const auto& [m, c] : terms_) {
        if (m.total_degree() > K)
            r.exact_ = false;
        else
            r.accumulate(m, c);
    }
    return r;
}

Series Series::negated() const {
    Series r = *this;
    for (auto& [m, c] : r.terms_) c = neg(c);
    return r;
}

Series Series::scaled(const Expr& factor) const {
    if (factor.is_zero()) {
        Series r;
        r.caps_ = caps_;
        r.exact_ = exact_;
        return r;
    }
    Series r;
    r.caps_ = caps_;
    r.exact_ = exact_;
    for (const auto& [m, c] : terms_) r.accumulate(m, c * factor);
    return r;
}

Series Series::divided_by_generators(const Mono& m) const {
    Series r;
    // Caps shift down with the degrees.
    for (const auto& [g, cap] : caps_) r.caps_[g] = cap - m.degree(g);
    r.exact_ = exact_;
    for (const auto& [mono, c] : terms_) {
        auto q = mono.divided_by(m);
        if (!q) throw DivisionError("series term lacks required generator factors");
        r.accumulate(*q, c);
    }
    return r;
}

double Series::evaluate_at(const Bindings& vars, const std::map<int, double>& gens) const {
    double total = 0.0;
    for (const auto& [m, c] : terms_) {
        double v = evaluate(c, vars);
        for (const auto& [g, e] : m.entries()) {
            auto it = gens.find(g);
            if (it == gens.end()) throw UnboundVariable("generator " + std::to_string(g));
            v *= std::pow(it->second, e);
        }
        total += v;
    }
    return total;
}

Expr Series::to_expr(const std::function<std::string(int)>& gen_name) const {
    std::vector<Expr> terms;
    terms.reserve(terms_.size());
    for (const auto& [m, c] : terms_) {
        std::vector<Expr> factors{c};
        for (const auto& [g, e] : m.entries())
            factors.push_back(pow(variable(gen_name(g)), Rational(e)));
        terms.push_back(product(std::move(factors)));
    }
    return sum(std::move(terms));
}

// Empty series carrying the merged caps (per-generator minimum) and combined
// exactness of the inputs.
Series merged_shell(const Series& a, const Series& b) {
    Series r;
    r.caps_ = a.caps_;
    for (const auto& [g, cap] : b.caps_) {
        auto it = r.caps_.find(g);
        if (it == r.caps_.end())
            r.caps_.emplace(g, cap);
        else
            it->second = std::min(it->second, cap);
    }
    r.exact_ = a.exact_ && b.exact_;
    return r;
}

Series add(const Series& a, const Series& b) {
    Series r = merged_shell(a, b);
    for (const auto& [m, c] : a.terms_) r.accumulate(m, c);
    for (const auto& [m, c] : b.terms_) r.accumulate(m, c);
    return r;
}

Series sub(const Series& a, const Series& b) { return add(a, b.negated()); }

Series mul(const Series& a, const Series& b) {
    Series r = merged_shell(a, b);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) r.accumulate(ma * mb, ca * cb);
    return r;
}

bool same_terms(const Series& a, const Series& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    auto ib = b.terms_.begin();
    for (const auto& [m, c] : a.terms_) {
        if (!(m == ib->first) || c != ib->second) return false;
        ++ib;
    }
    return true;
}

// --- Composition ------------------------------------------------------------

namespace {

constexpr int kMaxCompositionOrder = 64;

// j-th symbolic derivative of fn at the expression c, divided by j!.
Expr taylor_coefficient(const ElementaryFn& fn, const Expr& c, int j) {
    switch (fn.kind) {
        case ElementaryKind::Sin: {
            Expr base[4] = {sin(c), cos(c), neg(sin(c)), neg(cos(c))};
            return base[j % 4] * constant(Rational(1) / Rational::factorial(j));
        }
        case ElementaryKind::Cos: {
            Expr base[4] = {cos(c), neg(sin(c)), neg(cos(c)), sin(c)};
            return base[j % 4] * constant(Rational(1) / Rational::factorial(j));
        }
        case ElementaryKind::Exp:
            return exp(c) * constant(Rational(1) / Rational::factorial(j));
        case ElementaryKind::Ln: {
            if (j == 0) return ln(c);
            Rational k = Rational::factorial(j - 1) / Rational::factorial(j);
            if ((j - 1) % 2 == 1) k = -k;
            return constant(k) * pow(c, Rational(-j));
        }
        case ElementaryKind::Power: {
            Rational falling(1);
            for (int i = 0; i < j; ++i) falling *= fn.exponent - Rational(i);
            if (falling.is_zero()) return Expr{};
            Rational k = falling / Rational::factorial(j);
            return constant(k) * pow(c, fn.exponent - Rational(j));
        }
    }
    return Expr{};
}

// fn applied symbolically to an expression.
Expr apply_elementary(const ElementaryFn& fn, const Expr& c) { return taylor_coefficient(fn, c, 0); }

}  // namespace

Series compose_elementary(const ElementaryFn& fn, const Series& s, int K) {
    if (K < 1) throw ValidationError("composition order must be >= 1");
    Expr c0 = s.constant_term();

    bool needs_nonzero_base =
        fn.kind == ElementaryKind::Ln ||
        (fn.kind == ElementaryKind::Power && !fn.exponent.is_nonneg_integer());
    if (needs_nonzero_base && c0.is_zero())
        throw CompositionError("composition requires a nonzero constant term");

    Series t = sub(s, Series::constant(c0));
    if (!t.has_generator_terms())
        return add(s.shell(), Series::constant(apply_elementary(fn, c0)));

    bool terminating = fn.kind == ElementaryKind::Power && fn.exponent.is_nonneg_integer() &&
                       fn.exponent <= Rational(K);
    if (!terminating && K > kMaxCompositionOrder)
        throw ValidationError("composition order too large for a non-terminating expansion");

    int limit = K;
    if (fn.kind == ElementaryKind::Power && fn.exponent.is_nonneg_integer())
        limit = std::min<long long>(K, fn.exponent.to_int());

    Series result = add(t.shell(), Series::constant(apply_elementary(fn, c0)));
    Series power = Series::constant(dyncalc::constant(1));
    for (int j = 1; j <= limit; ++j) {
        power = mul(power, t);
        Expr cj = taylor_coefficient(fn, c0, j);
        if (cj.is_zero()) continue;
        result = add(result, power.scaled(cj));
    }
    if (!terminating) return result.truncated_to_total_degree(K).marked_inexact();
    return result;
}

Series lift(const Expr& e, const std::map<std::string, Series>& bindings, int K) {
    switch (e.kind()) {
        case Kind::Constant:
            return Series::constant(e);
        case Kind::Variable: {
            auto it = bindings.find(e.name());
            return it == bindings.end() ? Series::constant(e) : it->second;
        }
        case Kind::Sum: {
            Series r;
            for (const auto& k : e.operands()) r = add(r, lift(k, bindings, K));
            return r;
        }
        case Kind::Product: {
            Series r = Series::constant(constant(1));
            for (const auto& k : e.operands()) r = mul(r, lift(k, bindings, K));
            return r;
        }
        case Kind::Power: {
            Series base = lift(e.child(), bindings, K);
            if (!base.has_generator_terms())
                return add(base.shell(),
                           Series::constant(pow(base.constant_term(), e.exponent())));
            if (e.exponent().is_nonneg_integer() &&
                e.exponent() <= Rational(kMaxCompositionOrder)) {
                long long n = e.exponent().to_int();
                Series r = Series::constant(constant(1));
                for (long long i = 0; i < n; ++i) r = mul(r, base);
                return r;
            }
            return compose_elementary(ElementaryFn::power(e.exponent()), base, K);
        }
        case Kind::Sin:
        case Kind::Cos:
        case Kind::Exp:
        case Kind::Ln: {
            Series arg = lift(e.child(), bindings, K);
            ElementaryFn fn = e.kind() == Kind::Sin   ? ElementaryFn::sine()
                              : e.kind() == Kind::Cos ? ElementaryFn::cosine()
                              : e.kind() == Kind::Exp ? ElementaryFn::exponential()
                                                      : ElementaryFn::logarithm();
            return compose_elementary(fn, arg, K);
        }
    }
    return Series{};
}

}  // namespace dyncalc
