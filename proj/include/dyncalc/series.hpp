#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dyncalc/expr.hpp"

namespace dyncalc {

// Multi-degree over infinitesimal generators: (generator index, exponent)
// pairs, exponents > 0, sorted by index. The empty monomial is the constant
// term.
class Mono {
  public:
    Mono() = default;
    static Mono unit(int gen, int exponent = 1);

    int degree(int gen) const;
    int total_degree() const;
    bool is_constant() const { return degs_.empty(); }
    const std::vector<std::pair<int, int>>& entries() const { return degs_; }

    Mono operator*(const Mono& o) const;
    // Exact division; nullopt when any exponent would go negative.
    std::optional<Mono> divided_by(const Mono& o) const;

    friend bool operator==(const Mono&, const Mono&) = default;
    // Graded order: total degree first, then entries lexicographically.
    friend bool operator<(const Mono& a, const Mono& b);

  private:
    std::vector<std::pair<int, int>> degs_;
};

// Polynomial / truncated power series in ordered infinitesimal generators
// with Expr coefficients.
//
// Truncation is explicit: per-generator caps drop any term whose exponent in
// that generator exceeds the cap, and `exact` records whether a nonzero term
// was ever discarded. A series with no caps is an exact polynomial in its
// generators.
class Series {
  public:
    Series() = default;  // zero, exact, uncapped

    static Series constant(Expr c);
    static Series generator(int gen);
    static Series term(Mono m, Expr coeff);

    const std::map<Mono, Expr>& terms() const { return terms_; }
    const std::map<int, int>& caps() const { return caps_; }
    bool exact() const { return exact_; }
    bool is_zero() const { return terms_.empty(); }
    bool has_generator_terms() const;
    std::set<int> generators() const;

    // Stored coefficient or the zero expression.
    Expr coefficient(const Mono& m) const;
    Expr constant_term() const { return coefficient(Mono{}); }

    // Copy with the given cap applied (kept if tighter than an existing one);
    // dropping a nonzero term clears `exact`.
    Series with_cap(int gen, int cap) const;

    // Empty series carrying this one's caps and exactness flag.
    Series shell() const;
    Series marked_inexact() const;
    // Drops terms above the given total degree; dropping a nonzero term
    // clears `exact`.
    Series truncated_to_total_degree(int K) const;

    Series negated() const;
    Series scaled(const Expr& factor) const;
    // Exact monomial shift; throws DivisionError if any term lacks the
    // required generator factors.
    Series divided_by_generators(const Mono& m) const;

    // Real evaluation with generator values substituted.
    double evaluate_at(const Bindings& vars, const std::map<int, double>& gens) const;

    // Expression over the base variables and named generator variables.
    Expr to_expr(const std::function<std::string(int)>& gen_name) const;

    friend Series add(const Series& a, const Series& b);
    friend Series sub(const Series& a, const Series& b);
    friend Series mul(const Series& a, const Series& b);

    // Structural equality of terms (caps and exactness not compared).
    friend bool same_terms(const Series& a, const Series& b);

  private:
    std::map<Mono, Expr> terms_;
    std::map<int, int> caps_;
    bool exact_ = true;

    bool within_caps(const Mono& m) const;
    void accumulate(const Mono& m, const Expr& coeff);
    friend Series merged_shell(const Series& a, const Series& b);
};

// Default expansion order for transcendental composition.
inline constexpr int kDefaultOrder = 4;

enum class ElementaryKind { Sin, Cos, Exp, Ln, Power };

// An elementary function symbol: sin, cos, exp, ln, or a rational power.
struct ElementaryFn {
    ElementaryKind kind;
    Rational exponent;  // Power only
    static ElementaryFn sine() { return {ElementaryKind::Sin, Rational(0)}; }
    static ElementaryFn cosine() { return {ElementaryKind::Cos, Rational(0)}; }
    static ElementaryFn exponential() { return {ElementaryKind::Exp, Rational(0)}; }
    static ElementaryFn logarithm() { return {ElementaryKind::Ln, Rational(0)}; }
    static ElementaryFn power(Rational e) { return {ElementaryKind::Power, std::move(e)}; }
};

// Taylor expansion of fn about the constant term of s, applied to
// (s - constant term), retained through total degree K. Coefficients are the
// exact symbolic derivatives of fn divided by factorials. The result is exact
// only when the expansion terminates (nonnegative integer power); throws
// CompositionError when the constant term is the zero expression and fn needs
// a nonzero base (ln, negative or fractional powers).
Series compose_elementary(const ElementaryFn& fn, const Series& s, int K = kDefaultOrder);

// Series of an expression with some variables bound to series (typically
// x -> x + dx). Unbound variables stay symbolic inside coefficients.
Series lift(const Expr& e, const std::map<std::string, Series>& bindings, int K = kDefaultOrder);

}  // namespace dyncalc
