#pragma once

#include <string>

#include "dyncalc/expr.hpp"

namespace dyncalc {

// A family of antiderivatives: base expression plus an arbitrary additive
// constant. The base carries no explicit constant term. Deliberately distinct
// from a difference of antiderivatives, which is a plain number produced by
// the summation layer.
struct PrimitiveFamily {
    Expr base;
    std::string var;
    std::string constant_marker = "C";

    // "<base> + C"
    std::string str() const { return base.str() + " + " + constant_marker; }
};

// Rule-based antiderivative. Table, in matching order: squared sine/cosine
// rewrites, linearity, power rule (e != -1), 1/x -> ln x, direct sin/cos/exp,
// affine-inner substitution. Throws NoRuleApplies when the table cannot
// restore f; never falls back to anything numeric.
PrimitiveFamily restore(const Expr& f, const std::string& var);

// Change of variables u = inner for affine inner = a*var + b, a != 0:
// restores with respect to u, then divides by the slope a. Throws
// NonAffineInner otherwise.
PrimitiveFamily restore_with_substitution(const Expr& f, const std::string& var,
                                          const Expr& inner);

struct FamilyReport {
    Expr derivative_of_base;
    bool structural_ok = false;
    bool numeric_ok = false;
    double max_abs_err = 0.0;
    std::string rendered;  // the family, printed as "<base> + C"
};

// Differentiate-back contract: the base's static derivative must reproduce
// the integrand structurally or numerically (128 samples, tol 1e-9).
FamilyReport verify_family(const PrimitiveFamily& p, const Expr& f);

// sin(u)^2 -> (1 - cos 2u)/2 and cos(u)^2 -> (1 + cos 2u)/2, everywhere.
Expr rewrite_squared_trig(const Expr& e);

}  // namespace dyncalc
