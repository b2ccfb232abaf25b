#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace tsplab {

/// Mean computed relative to the first element. Besides the usual numerical
/// benefit, this makes the mean of identical values exactly equal to that
/// value, which downstream ratio computations rely on.
inline double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean: empty sample");
    double acc = 0.0;
    for (double x : v) acc += x - v[0];
    return v[0] + acc / static_cast<double>(v.size());
}

/// Median with the even-size convention: average of the two central order
/// statistics.
inline double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median: empty sample");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

/// Sample standard deviation (divisor n-1); 0 for samples of size < 2.
inline double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

inline double vec_min(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("vec_min: empty sample");
    return *std::min_element(v.begin(), v.end());
}

inline double vec_max(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("vec_max: empty sample");
    return *std::max_element(v.begin(), v.end());
}

} // namespace tsplab
