#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace glassy {

// Pairwise (cascade) summation.  Used for every reduction whose result is part
// of the reproducibility contract: the bracketing depends only on the element
// order, never on thread count or chunking.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    std::size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

inline double pairwise_mean(std::span<const double> v) {
    return pairwise_sum(v) / static_cast<double>(v.size());
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n);

} // namespace glassy
