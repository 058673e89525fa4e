#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dyncalc/expr.hpp"
#include "dyncalc/restore.hpp"

namespace dyncalc {

// Subdivision of [a, b] into strictly increasing nodes x0 = a < ... < xN = b.
struct Partition {
    enum class Scheme { Uniform, Custom };

    double a = 0.0;
    double b = 0.0;
    std::vector<double> nodes;
    Scheme scheme = Scheme::Uniform;

    std::size_t size() const { return nodes.size() - 1; }  // subinterval count

    static Partition uniform(double a, double b, std::size_t N);
    static Partition custom(std::vector<double> nodes);
};

// Result of a pseudo-discrete summation.
struct SumReport {
    double value = 0.0;
    std::size_t N = 0;
    std::vector<std::size_t> dropped;      // omitted subinterval indices (0-based)
    std::optional<double> reference;       // Newton-Leibniz value when available
    double abs_err = 0.0;                  // |value - reference| when reference present
    bool includes_alpha = false;
};

// Sum of the exact increments F(x_i) - F(x_{i-1}). Telescopes to F(b) - F(a)
// up to floating-point accumulation only, independent of N: retaining the
// full differential (restoring factor included) makes the summation exact at
// every subdivision.
SumReport dynamic_sum(const Expr& F, const std::string& var, const Partition& p);

// Left-endpoint sum of f(x_{i-1}) * (x_i - x_{i-1}); first-order convergent.
SumReport static_sum(const Expr& f, const std::string& var, const Partition& p,
                     std::optional<double> reference = std::nullopt);

// base(b) - base(a) via the rule-based antiderivative: a plain difference,
// deliberately not a PrimitiveFamily.
double newton_leibniz(const Expr& f, const std::string& var, double a, double b);

struct HypoReport {
    SumReport report;          // reference = the full static sum
    double bound = 0.0;        // dropped-count * max|f| * max width
    bool within_bound = false;
    double max_abs_f = 0.0;
};

// Static sum with the given subinterval indices omitted. The omitted part is
// bounded by l * max|f| * max-width, so it vanishes as N grows with l fixed.
HypoReport hypo_sum(const Expr& f, const std::string& var, const Partition& p,
                    const std::vector<std::size_t>& dropped);

struct Piece {
    double lo = 0.0;
    double hi = 0.0;
    Expr f;
};

// Left sums over a partition refined to include every breakpoint; the
// reference is the piecewise antiderivative difference with constants matched
// for continuity at the breakpoints.
SumReport integrate_piecewise(const std::vector<Piece>& pieces, const std::string& var, double a,
                              double b, std::size_t N);

struct ConvergenceRow {
    std::size_t N = 0;
    double value = 0.0;
    double reference = 0.0;
    double abs_err = 0.0;
    std::optional<double> slope_estimate;  // vs the previous row
};

// CSV with header "N,value,reference,abs_err,slope_estimate".
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);

}  // namespace dyncalc
