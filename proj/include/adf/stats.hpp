#pragma once

#include <cmath>
#include <span>

namespace adf {

/// Percentile with linear interpolation between order statistics
/// (rank = pct/100 * (n-1)). pct must lie in [0, 100]; values non-empty.
double percentile(std::span<const double> values, double pct);

/// Neumaier compensated summation; accumulation order is the caller's.
struct NeumaierSum {
    double sum = 0.0;
    double compensation = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            compensation += (sum - t) + x;
        } else {
            compensation += (x - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + compensation; }
};

}  // namespace adf
