#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "ageing/ecdf.hpp"
#include "ageing/kernels.hpp"
#include "ageing/ustat.hpp"

// Block-sum estimator of the long-run standard deviation of the projection
// series Y_i = rho1_hat(X_i). B_n averages |centered block sum|/sqrt(l) over
// all overlapping length-l blocks and converges to sigma * sqrt(2/pi), so
// the reported sigma_hat carries the sqrt(pi/2) correction.

namespace ageing {

// l_n = floor(sqrt(n)), at least 1. This is the block-length rule the
// reference simulation tables were produced with: it reproduces their
// estimator means/EMSEs and size/power cells across the whole window-size
// grid, where floor(n^{1/3}) matches only the weakly dependent cells and
// under-captures the long-range covariance for wide windows. Integer
// correction guards against sqrt landing a hair off an exact square.
inline int block_length(std::size_t n) {
    if (n < 2) {
        throw std::invalid_argument("block_length: need n >= 2");
    }
    auto square = [](long long v) { return v * v; };
    long long ell = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (square(ell + 1) <= static_cast<long long>(n)) ++ell;
    while (ell > 1 && square(ell) > static_cast<long long>(n)) --ell;
    return static_cast<int>(ell < 1 ? 1 : ell);
}

// B_n = (1/(n-l+1)) sum_{j=0}^{n-l} |S_j(l) - l*Ybar| / sqrt(l), with
// S_j(l) the sum of Y_{j+1}..Y_{j+l}. Block sums are re-accumulated per
// block: the O(n l) cost is dwarfed by the projection-series construction
// and there is no sliding-window drift.
inline double b_n(std::span<const double> series, int ell) {
    const std::size_t n = series.size();
    if (ell < 1 || static_cast<std::size_t>(ell) > n) {
        throw std::invalid_argument("b_n: block length out of range");
    }
    // Work on Y_i - Y_0. B_n is translation invariant, the shifted block
    // sums are better conditioned, and a constant series comes out exactly 0.
    const double shift = series[0];
    KahanSum mean_acc;
    for (double y : series) mean_acc.add(y - shift);
    const double block_mean = mean_acc.value() / static_cast<double>(n) * ell;

    KahanSum total;
    for (std::size_t j = 0; j + ell <= n; ++j) {
        KahanSum block;
        for (int i = 0; i < ell; ++i) block.add(series[j + i] - shift);
        total.add(std::fabs(block.value() - block_mean));
    }
    const double blocks = static_cast<double>(n - ell + 1);
    return total.value() / (blocks * std::sqrt(static_cast<double>(ell)));
}

struct SigmaEstimate {
    double sigma_hat = 0.0;  // sqrt(pi/2) * b_n_raw
    int block_length = 1;
    double b_n_raw = 0.0;
    bool degenerate = false; // sigma_hat == 0; standardization would divide by zero
};

// Projection series for the given test, in original sample order.
inline std::vector<double> projection_series(std::span<const double> sample, TestKind kind,
                                             const KernelParams& params) {
    const Ecdf ecdf(sample);
    std::vector<double> series;
    series.reserve(sample.size());
    switch (kind) {
        case TestKind::deshpande_ifra:
            for (double x : sample) series.push_back(deshpande_rho1_hat(x, ecdf, params));
            break;
        case TestKind::hollander_proschan_nbu:
            for (double x : sample) series.push_back(hp_rho1_hat(x, ecdf));
            break;
        case TestKind::ahmad_dmrl:
            for (double x : sample) series.push_back(ahmad_rho1_hat(x, ecdf));
            break;
    }
    return series;
}

inline SigmaEstimate sigma_hat_for_test(std::span<const double> sample, TestKind kind,
                                        const KernelParams& params) {
    const std::size_t min_n = kind == TestKind::hollander_proschan_nbu ? 3 : 2;
    if (sample.size() < min_n) {
        throw std::invalid_argument("sigma_hat_for_test: sample too small for this test");
    }
    const std::vector<double> series = projection_series(sample, kind, params);
    SigmaEstimate est;
    est.block_length = block_length(sample.size());
    est.b_n_raw = b_n(series, est.block_length);
    est.sigma_hat = est.b_n_raw * std::sqrt(3.14159265358979323846 / 2.0);
    est.degenerate = est.sigma_hat == 0.0;
    return est;
}

} // namespace ageing
