#pragma once

#include <string>
#include <vector>

#include "dyncalc/series.hpp"

namespace dyncalc {

// The expansion F(x + dx) - F(x) split into its linear part and the retained
// remainder:
//
//   series    = F(x+dx) - F(x), every term carries a generator factor
//   static_part  f(x): coefficient of the linear generator term
//   alpha     = series/dx - f(x), the generator-dependent rest of the
//               difference quotient; vanishes with dx
//   remainder = alpha * dx = series - f(x) dx
//
// For several variables `linear` holds one coefficient per variable (the
// partial derivatives); alpha is then the whole above-linear remainder and
// the single-generator quotient identity does not apply.
struct DynamicDifferential {
    std::vector<std::string> vars;
    std::vector<int> gens;                // gens[i] is the generator for vars[i]
    std::vector<std::string> gen_names;   // printable generator names
    Series series;
    std::vector<Expr> linear;
    Series alpha;
    Series remainder;
    bool exact = false;

    const Expr& static_part() const { return linear.front(); }
    std::string generator_name(int gen) const;
    // f(x) + alpha as one expression over the base variables and generators.
    Expr dynamic_expr() const;
};

// Generator naming: "dx" for single-variable use, "d1x", "d2x", ... when a
// step index is needed.
std::string generator_name(int index, const std::string& var, bool indexed);

DynamicDifferential dynamic_differential(const Expr& F, const std::string& var,
                                         int K = kDefaultOrder);

// The linear coefficient f(x); agrees with the classical symbolic derivative.
Expr static_derivative(const Expr& F, const std::string& var);

// f(x) + alpha(dx) over the base variable and the generator "d<var>".
Expr dynamic_derivative(const Expr& F, const std::string& var, int K = kDefaultOrder);

// Iterated differencing with a fresh generator per step, divided by the
// product of all generators. Setting every generator to zero yields the
// classical n-th derivative. Polynomials take the exact path; transcendental
// functions are truncated at per-generator order K (requires K >= n).
Expr nth_dynamic_derivative(const Expr& F, const std::string& var, int n, int K = kDefaultOrder);

// The n-fold difference series before division, exposed for the exactness
// and symmetry properties.
Series nth_difference_series(const Expr& F, const std::string& var, int n, int K = kDefaultOrder);

DynamicDifferential total_dynamic_differential(const Expr& F, const std::vector<std::string>& vars,
                                               int K = kDefaultOrder);

// Comparison of the two derivative routes for a composition E(F(t)):
// the static derivative of the substituted composition against
// E'(F(t)) * F'(t), plus the inner increment's restoring function (alpha),
// which is nonzero exactly when the inner map is nonlinear.
struct ChainReport {
    std::string input;
    Expr composition;
    Expr composition_static;   // derivative of the composed expression
    Expr product_route;        // outer'(inner) * inner'
    Expr composition_dynamic;  // dynamic derivative of the composition
    Series inner_alpha;
    bool inner_alpha_zero = true;
    bool structural_equal = false;
    double max_abs_err = 0.0;
    std::string verdict;  // "structural" | "numeric" | "mismatch"
};

ChainReport chain_check(const Expr& outer, const std::string& outer_var, const Expr& inner,
                        const std::string& inner_var, int K = kDefaultOrder, double tol = 1e-9);

// Classical rule-based symbolic differentiation. Reference implementation
// used to cross-check the expansion route; not the product-facing derivative.
Expr symbolic_derivative(const Expr& e, const std::string& var);
Expr nth_symbolic_derivative(const Expr& e, const std::string& var, int n);

// (F(x+h) - F(x-h)) / 2h.
double central_difference(const Expr& F, const std::string& var, const Bindings& at, double h);

bool polynomial_in(const Expr& e, const std::string& var);

}  // namespace dyncalc
