#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dyncalc {

// Base class for all errors raised by the engine.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid expression text. `offset` is the byte position of the first
// offending character.
struct SyntaxError : Error {
    SyntaxError(std::size_t offset, const std::string& msg)
        : Error(msg + " (at byte " + std::to_string(offset) + ")"), offset(offset) {}
    std::size_t offset;
};

// Evaluation outside the function domain: division by zero, ln of a
// nonpositive value, fractional power of a negative base, overflow.
struct DomainError : Error {
    using Error::Error;
};

struct UnboundVariable : Error {
    explicit UnboundVariable(const std::string& var)
        : Error("unbound variable '" + var + "'"), var(var) {}
    std::string var;
};

// Series composition needs a nonzero constant term (ln, negative powers).
struct CompositionError : Error {
    using Error::Error;
};

// The antiderivative rule table has no rule for the integrand. Signals
// incompleteness of the table, not wrongness of the input.
struct NoRuleApplies : Error {
    using Error::Error;
};

struct NonAffineInner : Error {
    using Error::Error;
};

struct IndexOutOfRange : Error {
    using Error::Error;
};

struct BreakpointOutsideDomain : Error {
    using Error::Error;
};

// Exact division of a series by a generator monomial hit a term that lacks
// the required generator factors.
struct DivisionError : Error {
    using Error::Error;
};

// Bad arguments to an operation (option ranges, malformed fixtures).
struct ValidationError : Error {
    using Error::Error;
};

}  // namespace dyncalc
