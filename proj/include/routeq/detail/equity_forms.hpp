#pragma once

#include <cmath>
#include <span>

// Closed forms over descending-sorted workload vectors. evaluate() and the
// exact solver's screening path both go through these, so the same workload
// multiset yields bitwise-identical balance values on either path.

namespace routeq::detail {

inline double sorted_sum(std::span<const double> v) {
    double s = 0;
    for (double x : v) s += x;
    return s;
}

inline double mad_sorted(std::span<const double> v, double mean) {
    double sad = 0;
    for (double x : v) sad += std::abs(x - mean);
    return sad / static_cast<double>(v.size());
}

// Sum of squared deviations (the StDev screen form; StDev = sqrt(ssq/k)).
inline double ssq_sorted(std::span<const double> v, double mean) {
    double ssq = 0;
    for (double x : v) ssq += (x - mean) * (x - mean);
    return ssq;
}

// sum over i<j of (v_i - v_j) for nonincreasing v, as a linear form.
inline double gini_pairsum_sorted(std::span<const double> v) {
    const int k = static_cast<int>(v.size());
    double g = 0;
    for (int i = 0; i < k; ++i) g += static_cast<double>(k - 1 - 2 * i) * v[i];
    return g;
}

// Ordered-pair Gini: sum_i sum_j |x_i - x_j| / (2 k^2 mean).
inline double gini_sorted(std::span<const double> v, double mean) {
    const double k = static_cast<double>(v.size());
    return 2.0 * gini_pairsum_sorted(v) / (2.0 * k * k * mean);
}

}  // namespace routeq::detail
