#include "adf/stats.hpp"

#include <algorithm>
#include <vector>

#include "adf/errors.hpp"

namespace adf {

double percentile(std::span<const double> values, double pct) {
    if (values.empty()) throw TooFewPoints("percentile: empty input");
    if (!(pct >= 0.0 && pct <= 100.0))
        throw DataError("percentile: pct outside [0, 100]");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double rank = pct / 100.0 * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(rank);
    if (lo + 1 >= n) return sorted[n - 1];
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace adf
