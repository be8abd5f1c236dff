#ifndef CAVCHAIN_NUMERIC_HPP
#define CAVCHAIN_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <complex>

namespace cavchain {

// Discrepancy scaled to max(1, magnitudes): relative for large values,
// absolute for values below 1. T, R and determinants are O(1), so this is
// the comparison used throughout.
inline double rel_diff(double x, double y) {
    return std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)});
}

inline double rel_diff(std::complex<double> x, std::complex<double> y) {
    return std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)});
}

// Reduce an angle to (-pi, pi].
inline double wrap_phase(double phi) {
    double w = std::remainder(phi, 2.0 * M_PI);
    if (w <= -M_PI) w += 2.0 * M_PI;
    return w;
}

} // namespace cavchain

#endif
