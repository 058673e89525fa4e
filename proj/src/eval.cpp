#include <cmath>
#include <random>
#include <vector>

#include "dyncalc/error.hpp"
#include "dyncalc/expr.hpp"

namespace dyncalc {

namespace {

double eval_rec(const Expr& e, const Bindings& b) {
    switch (e.kind()) {
        case Kind::Constant:
            return e.value().to_double();
        case Kind::Variable: {
            auto it = b.find(e.name());
            if (it == b.end()) throw UnboundVariable(e.name());
            return it->second;
        }
        case Kind::Sin:
            return std::sin(eval_rec(e.child(), b));
        case Kind::Cos:
            return std::cos(eval_rec(e.child(), b));
        case Kind::Exp:
            return std::exp(eval_rec(e.child(), b));
        case Kind::Ln: {
            double v = eval_rec(e.child(), b);
            if (v <= 0.0) throw DomainError("ln of nonpositive value");
            return std::log(v);
        }
        case Kind::Power: {
            double base = eval_rec(e.child(), b);
            const Rational& x = e.exponent();
            if (x.is_integer()) {
                if (base == 0.0 && x.is_negative()) throw DomainError("division by zero");
                return std::pow(base, x.to_double());
            }
            if (base < 0.0) throw DomainError("fractional power of negative base");
            if (base == 0.0) {
                if (x.is_negative()) throw DomainError("division by zero");
                return 0.0;
            }
            return std::pow(base, x.to_double());
        }
        case Kind::Product: {
            double r = 1.0;
            for (const auto& k : e.operands()) r *= eval_rec(k, b);
            return r;
        }
        case Kind::Sum: {
            double r = 0.0;
            for (const auto& k : e.operands()) r += eval_rec(k, b);
            return r;
        }
    }
    return 0.0;
}

}  // namespace

double evaluate(const Expr& e, const Bindings& bindings) {
    double v = eval_rec(e, bindings);
    if (!std::isfinite(v)) throw DomainError("non-finite result");
    return v;
}

namespace {

constexpr double kSingularityMargin = 1e-3;
constexpr int kMaxRetries = 16;

// Uniform draw from [-3, 3], portable across platforms for a fixed seed.
double draw_sample(std::mt19937& rng) {
    double u = static_cast<double>(rng()) / 4294967296.0;
    return u * 6.0 - 3.0;
}

// Both expressions must evaluate finitely at the point and at +-margin
// offsets of each variable; otherwise the point counts as near-singular.
void probe(const Expr& e, const Bindings& at, const std::vector<std::string>& vars) {
    (void)evaluate(e, at);
    for (const auto& v : vars) {
        Bindings shifted = at;
        shifted[v] += kSingularityMargin;
        (void)evaluate(e, shifted);
        shifted[v] -= 2.0 * kSingularityMargin;
        (void)evaluate(e, shifted);
    }
}

}  // namespace

double max_abs_difference(const Expr& a, const Expr& b, int samples, std::uint32_t seed) {
    std::set<std::string> var_set = free_variables(a);
    for (const auto& v : free_variables(b)) var_set.insert(v);
    std::vector<std::string> vars(var_set.begin(), var_set.end());

    std::mt19937 rng(seed);
    double max_diff = 0.0;
    for (int s = 0; s < samples; ++s) {
        for (int attempt = 0;; ++attempt) {
            Bindings at;
            for (const auto& v : vars) at[v] = draw_sample(rng);
            try {
                probe(a, at, vars);
                probe(b, at, vars);
                double diff = std::fabs(evaluate(a, at) - evaluate(b, at));
                if (diff > max_diff) max_diff = diff;
                break;
            } catch (const DomainError&) {
                if (attempt + 1 >= kMaxRetries) throw;
            }
        }
    }
    return max_diff;
}

bool numeric_equal(const Expr& a, const Expr& b, int samples, double tol, std::uint32_t seed) {
    return max_abs_difference(a, b, samples, seed) <= tol;
}

}  // namespace dyncalc
