#pragma once

#include <cmath>
#include <stdexcept>

namespace ageing {

// Standard normal CDF via erfc; good to ~1 ulp over the whole range.
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

// Standard normal quantile. Bisection on the CDF followed by Newton polish;
// no rational-approximation constants to get wrong, and the CDF is the
// single source of truth. Absolute error well below 1e-12.
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("normal_quantile: p must lie in (0,1)");
    }
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (normal_cdf(mid) < p ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 3; ++i) {
        const double d = normal_pdf(x);
        if (d <= 0.0) break;
        x -= (normal_cdf(x) - p) / d;
    }
    return x;
}

} // namespace ageing
