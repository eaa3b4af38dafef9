#pragma once

#include <cstddef>
#include <span>

namespace qim::num {

// Pairwise (tree) summation: error grows like O(log n · eps) instead of
// O(n · eps), which keeps similarity differences at the 1e-15 level
// trustworthy for the fine-grained ranking experiments.
inline double pairwise_sum(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

} // namespace qim::num
