#pragma once

#include <cmath>
#include <stdexcept>

#include "ageing/ecdf.hpp"
#include "ageing/quadrature.hpp"

// Kernels of the three exponentiality tests, their exact null projections
// under Exp(mu), and the empirical plug-in projections used by the
// block-sum standard-deviation estimator. All indicator comparisons are
// strict IEEE comparisons: ties contribute zero, no epsilons.

namespace ageing {

// Which of the three decision procedures is being run.
enum class TestKind {
    deshpande_ifra,
    hollander_proschan_nbu,
    ahmad_dmrl,
};

inline const char* test_kind_name(TestKind kind) {
    switch (kind) {
        case TestKind::deshpande_ifra: return "deshpande";
        case TestKind::hollander_proschan_nbu: return "hollander-proschan";
        case TestKind::ahmad_dmrl: return "ahmad";
    }
    return "?";
}

// Scale fraction b of the Deshpande kernel, 0 < b < 1.
struct KernelParams {
    double b = 0.5;

    void validate() const {
        if (!(b > 0.0 && b < 1.0)) {
            throw std::domain_error("KernelParams: b must lie strictly in (0,1)");
        }
    }
};

// --- kernels -------------------------------------------------------------

inline double deshpande_h1(double x, double y, const KernelParams& params) {
    return x > params.b * y ? 1.0 : 0.0;
}

inline double deshpande_rho(double x, double y, const KernelParams& params) {
    return 0.5 * (deshpande_h1(x, y, params) + deshpande_h1(y, x, params));
}

inline double hp_phi(double x1, double x2, double x3) {
    return x1 > x2 + x3 ? 1.0 : 0.0;
}

inline double hp_rho(double x1, double x2, double x3) {
    return (hp_phi(x1, x2, x3) + hp_phi(x2, x1, x3) + hp_phi(x3, x1, x2)) / 3.0;
}

inline double ahmad_phi(double x1, double x2) {
    return x2 > x1 ? 3.0 * x1 - x2 : 0.0;
}

inline double ahmad_rho(double x1, double x2) {
    return 0.5 * (ahmad_phi(x1, x2) + ahmad_phi(x2, x1));
}

// --- exact projections under the exponential null ------------------------

// Deshpande projection (Fbar(bx) + F(x/b))/2 specialized to Exp(mu).
inline double deshpande_rho1_null(double x, const KernelParams& params, double mu) {
    if (!(mu > 0.0)) {
        throw std::domain_error("deshpande_rho1_null: mu must be positive");
    }
    return 0.5 * (std::exp(-params.b * x / mu) + 1.0 - std::exp(-x / (params.b * mu)));
}

// Hollander-Proschan projection under Exp(mu) by quadrature of its three
// integral terms: int_0^x F(x-z) dF(z) + int_0^inf Fbar(x+z) dF(z)
// + int_x^inf F(z-x) dF(z), all divided by 3.
inline double hp_rho1_null(double x, double mu, double tol = 1e-10) {
    const auto F = [mu](double t) { return t <= 0.0 ? 0.0 : 1.0 - std::exp(-t / mu); };
    const double first = exp_expectation([&](double z) { return z <= x ? F(x - z) : 0.0; }, mu, tol);
    const double second = exp_expectation([&](double z) { return std::exp(-(x + z) / mu); }, mu, tol);
    const double third = exp_expectation([&](double z) { return z >= x ? F(z - x) : 0.0; }, mu, tol);
    return (first + second + third) / 3.0;
}

// Ahmad projection 2x Fbar(x) - x/2 + 3mu/2 - 2 int_x^inf y dF(y) under
// Exp(mu); the tail moment is evaluated by quadrature.
inline double ahmad_rho1_null(double x, double mu, double tol = 1e-10) {
    const double tail_moment = exp_expectation([&](double y) { return y > x ? y : 0.0; }, mu, tol);
    return 2.0 * x * std::exp(-x / mu) - 0.5 * x + 1.5 * mu - 2.0 * tail_moment;
}

// --- empirical plug-in projections (Ecdf-based) ---------------------------

// (F_n(x/b) + 1 - F_n(xb))/2.
inline double deshpande_rho1_hat(double x, const Ecdf& ecdf, const KernelParams& params) {
    return 0.5 * (ecdf(x / params.b) + 1.0 - ecdf(x * params.b));
}

// (1/3)( sum_{X_i <= x} F_n(x-X_i)/n + sum_i Fbar_n(x+X_i)/n
//        + sum_{X_i >= x} F_n(X_i-x)/n ).
// An observation equal to x lands in both the first and the third sum.
// Each inner ECDF argument moves monotonically as X_i runs through the
// sorted sample, so one merge pointer per sum makes the call O(n); this is
// the hot inner loop of the sigma_hat construction.
inline double hp_rho1_hat(double x, const Ecdf& ecdf) {
    const auto& xs = ecdf.sorted();
    const std::size_t n = xs.size();
    const double dn = static_cast<double>(n);
    double lower = 0.0, middle = 0.0, upper = 0.0;

    std::size_t c = n; // #{X_j <= x - X_i}, non-increasing in i
    for (std::size_t i = 0; i < n && xs[i] <= x; ++i) {
        const double t = x - xs[i];
        while (c > 0 && xs[c - 1] > t) --c;
        lower += static_cast<double>(c) / dn;
    }
    std::size_t cm = 0; // #{X_j <= x + X_i}, non-decreasing in i
    for (std::size_t i = 0; i < n; ++i) {
        const double t = x + xs[i];
        while (cm < n && xs[cm] <= t) ++cm;
        middle += 1.0 - static_cast<double>(cm) / dn;
    }
    std::size_t cu = 0; // #{X_j <= X_i - x}, non-decreasing in i
    for (std::size_t i = ecdf.count_lt(x); i < n; ++i) {
        const double t = xs[i] - x;
        while (cu < n && xs[cu] <= t) ++cu;
        upper += static_cast<double>(cu) / dn;
    }
    return (lower + middle + upper) / (3.0 * dn);
}

// 2x Fbar_n(x) - x/2 + 3 Xbar_n/2 - 2 sum{X_i > x} X_i / n.
inline double ahmad_rho1_hat(double x, const Ecdf& ecdf) {
    const double n = static_cast<double>(ecdf.size());
    return 2.0 * x * ecdf.survival(x) - 0.5 * x + 1.5 * ecdf.mean() -
           2.0 * ecdf.tail_sum(x) / n;
}

} // namespace ageing
