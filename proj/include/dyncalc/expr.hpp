#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dyncalc/rational.hpp"

namespace dyncalc {

// Immutable symbolic expressions over real variables with exact rational
// constants. Every Expr is canonical by construction:
//
//   - sums and products are flattened, like terms/factors merged, operands
//     sorted by a fixed total order, rational constants folded;
//   - products distribute over sums and positive integer powers of sums are
//     expanded, so polynomial identities reduce to structural equality;
//   - negation is carried as a rational coefficient, quotients as negative
//     powers.
//
// Exponents are always rational constants. A base raised to a non-integer
// exponent is assumed positive.
//
// Grammar accepted by parse() and emitted by str():
//
//   expr     := ['+'|'-'] term (('+'|'-') term)*
//   term     := factor (('*'|'/') factor)*
//   factor   := atom ['^' exponent]
//   atom     := number | name | name '(' expr ')' | '(' expr ')'
//   exponent := ['-'] digits | '(' ['-'] digits ['/' digits] ')'
//   number   := digits ['.' digits]
//
// Recognized function names: sin, cos, exp, ln. Whitespace is insignificant.

enum class Kind : unsigned char { Constant, Variable, Sin, Cos, Exp, Ln, Power, Product, Sum };

class Expr {
  public:
    Expr();  // the zero constant

    Kind kind() const { return node_->kind; }
    const Rational& value() const { return node_->value; }      // Constant
    const std::string& name() const { return node_->name; }     // Variable
    const Expr& child() const { return node_->kids.front(); }   // fn argument / power base
    const Rational& exponent() const { return node_->value; }   // Power
    const std::vector<Expr>& operands() const { return node_->kids; }  // Sum / Product

    bool is_constant() const { return kind() == Kind::Constant; }
    bool is_zero() const { return is_constant() && value().is_zero(); }
    bool is_one() const { return is_constant() && value().is_one(); }
    bool mentions(std::string_view var) const;

    std::string str() const;

    friend bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
    friend bool operator!=(const Expr& a, const Expr& b) { return compare(a, b) != 0; }

    // Deterministic total order on canonical trees; drives operand sorting.
    friend int compare(const Expr& a, const Expr& b);

    struct Node {
        Kind kind = Kind::Constant;
        Rational value;          // Constant value or Power exponent
        std::string name;        // Variable
        std::vector<Expr> kids;  // argument(s)
    };

  private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
    friend Expr make_node(Node&&);
};

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// Canonicalizing constructors.
Expr constant(Rational v);
Expr constant(long long v);
Expr variable(std::string name);
Expr sum(std::vector<Expr> terms);
Expr product(std::vector<Expr> factors);
Expr pow(Expr base, Rational exponent);
Expr sin(Expr arg);
Expr cos(Expr arg);
Expr exp(Expr arg);
Expr ln(Expr arg);
Expr neg(Expr e);
Expr quotient(Expr num, Expr den);

inline Expr operator+(Expr a, Expr b) { return sum({std::move(a), std::move(b)}); }
inline Expr operator-(Expr a, Expr b) { return sum({std::move(a), neg(std::move(b))}); }
inline Expr operator*(Expr a, Expr b) { return product({std::move(a), std::move(b)}); }
inline Expr operator/(Expr a, Expr b) { return quotient(std::move(a), std::move(b)); }
inline Expr operator-(Expr a) { return neg(std::move(a)); }
inline Expr operator*(Rational a, Expr b) { return product({constant(std::move(a)), std::move(b)}); }
inline Expr operator*(long long a, Expr b) { return product({constant(a), std::move(b)}); }

// Rebuilds the tree through the canonicalizing constructors. Identity on
// canonical input; exercised by the idempotence property tests.
Expr canonicalized(const Expr& e);

// Replaces every free occurrence of `var`; the result is canonical.
Expr substitute(const Expr& e, std::string_view var, const Expr& replacement);

std::set<std::string> free_variables(const Expr& e);

Expr parse(std::string_view text);

using Bindings = std::map<std::string, double>;

// Standard real evaluation in double precision. Throws DomainError (division
// by zero, ln of a nonpositive value, fractional power of a negative base,
// non-finite result) or UnboundVariable.
double evaluate(const Expr& e, const Bindings& bindings);

// Largest |a - b| over `samples` deterministic sample points drawn from
// [-3, 3] per free variable. Points within 1e-3 of a singularity of either
// expression are resampled, at most 16 retries each; DomainError propagates
// when retries are exhausted.
double max_abs_difference(const Expr& a, const Expr& b, int samples, std::uint32_t seed = 42);

// True iff |a - b| <= tol at every sampled binding.
bool numeric_equal(const Expr& a, const Expr& b, int samples, double tol,
                   std::uint32_t seed = 42);

}  // namespace dyncalc
