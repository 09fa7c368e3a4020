#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace seqaudit {

inline double mean_of(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean of empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

// Population variance (divide by n). Two-pass for accuracy.
inline double population_variance(std::span<const double> xs) {
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size());
}

// Unbiased sample variance (divide by n-1).
inline double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("sample variance needs n >= 2");
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

// Empirical quantile with linear interpolation between order statistics
// (the usual "type 7" rule: h = (n-1)p).
inline double empirical_quantile(std::vector<double> xs, double p) {
    if (xs.empty()) throw std::invalid_argument("quantile of empty sample");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile p outside [0,1]");
    std::sort(xs.begin(), xs.end());
    const double h = (static_cast<double>(xs.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= xs.size()) return xs.back();
    const double frac = h - static_cast<double>(lo);
    return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

inline bool all_finite(std::span<const double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace seqaudit
