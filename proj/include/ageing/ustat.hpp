#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ageing/kernels.hpp"

// U-statistic evaluation. The generic degree-2/3 routines enumerate every
// subset with compensated accumulation; Deshpande's J and the
// Hollander-Proschan N also have exact counting paths built on the sorted
// sample that agree with enumeration to the last bit of the count.

namespace ageing {

// Neumaier variant of Kahan summation. At n = 500 the degree-3 sum has
// ~2e7 terms; plain accumulation loses digits the 1e-12 oracle tolerance
// cannot afford.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + comp; }
};

template <typename Kernel>
double u_stat_deg2(std::span<const double> xs, Kernel&& kernel) {
    const std::size_t n = xs.size();
    if (n < 2) {
        throw std::invalid_argument("u_stat_deg2: need at least 2 observations");
    }
    KahanSum acc;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            acc.add(kernel(xs[i], xs[j]));
        }
    }
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    return acc.value() / pairs;
}

template <typename Kernel>
double u_stat_deg3(std::span<const double> xs, Kernel&& kernel) {
    const std::size_t n = xs.size();
    if (n < 3) {
        throw std::invalid_argument("u_stat_deg3: need at least 3 observations");
    }
    KahanSum acc;
    for (std::size_t i = 0; i + 2 < n; ++i) {
        for (std::size_t j = i + 1; j + 1 < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                acc.add(kernel(xs[i], xs[j], xs[k]));
            }
        }
    }
    const double triples = static_cast<double>(n) * static_cast<double>(n - 1) *
                           static_cast<double>(n - 2) / 6.0;
    return acc.value() / triples;
}

namespace detail {

inline std::vector<double> sorted_nonneg(std::span<const double> xs, const char* who) {
    std::vector<double> s(xs.begin(), xs.end());
    std::sort(s.begin(), s.end());
    if (!s.empty() && s.front() < 0.0) {
        throw std::invalid_argument(std::string(who) + ": observations must be non-negative");
    }
    return s;
}

} // namespace detail

// Deshpande's J: the mean of (h1(x,y)+h1(y,x))/2 over unordered pairs equals
// #{ordered pairs i != j with X_i > b X_j} / (n(n-1)). Counting on the
// sorted sample makes the sum an exact integer in O(n log n).
inline double deshpande_j(std::span<const double> xs, const KernelParams& params) {
    params.validate();
    const std::size_t n = xs.size();
    if (n < 2) {
        throw std::invalid_argument("deshpande_j: need at least 2 observations");
    }
    const std::vector<double> s = detail::sorted_nonneg(xs, "deshpande_j");
    std::uint64_t ordered = 0;
    for (double xj : s) {
        const std::size_t le = static_cast<std::size_t>(
            std::upper_bound(s.begin(), s.end(), params.b * xj) - s.begin());
        ordered += n - le;
        if (xj > params.b * xj) --ordered; // remove the self-pair
    }
    return static_cast<double>(ordered) / (static_cast<double>(n) * static_cast<double>(n - 1));
}

// Hollander-Proschan N. For non-negative values at most one orientation of
// the degree-3 kernel can fire, and it fires exactly when the largest of the
// triple exceeds the sum of the other two. So sum rho = (1/3) * #{sorted
// triples a<=b<=c with c > a+b}, countable with a forward-only scan per
// anchor in O(n^2).
inline double hp_n(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n < 3) {
        throw std::invalid_argument("hp_n: need at least 3 observations");
    }
    const std::vector<double> s = detail::sorted_nonneg(xs, "hp_n");
    std::uint64_t fired = 0;
    for (std::size_t a = 0; a + 2 < n; ++a) {
        std::size_t p = a + 2; // first candidate position for the dominant value
        for (std::size_t b = a + 1; b + 1 < n; ++b) {
            const double threshold = s[a] + s[b];
            if (p < b + 1) p = b + 1;
            while (p < n && !(s[p] > threshold)) ++p;
            if (p == n) break; // thresholds only grow with b
            fired += n - p;
        }
    }
    const double triples = static_cast<double>(n) * static_cast<double>(n - 1) *
                           static_cast<double>(n - 2) / 6.0;
    return static_cast<double>(fired) / (3.0 * triples);
}

// Ahmad's delta: plain enumeration with compensated accumulation.
inline double ahmad_delta(std::span<const double> xs) {
    return u_stat_deg2(xs, [](double x, double y) { return ahmad_rho(x, y); });
}

} // namespace ageing
