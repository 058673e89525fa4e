#pragma once

#include <cmath>

namespace dyncalc {

// Neumaier-compensated accumulator. Sequential and order-fixed, so totals are
// bit-stable across runs.
class CompensatedSum {
  public:
    void add(double x) {
        double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace dyncalc
