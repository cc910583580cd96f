#pragma once

#include <cmath>
#include <utility>

// Adaptive Simpson quadrature plus helpers for expectations under an
// exponential law, used by the null-projection diagnostics and by the
// cross-checks of closed-form constants.

namespace ageing {

namespace detail {

template <typename F>
double adaptive_simpson_step(const F& f, double a, double b, double fa, double fm, double fb,
                             double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// Integral of f over [a,b] to absolute tolerance tol.
template <typename F>
double integrate(F&& f, double a, double b, double tol = 1e-10) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_step(f, a, b, fa, fm, fb, whole, tol, 48);
}

// E[g(X)] for X ~ Exp(mean mu), i.e. (1/mu) * integral of g(x) e^{-x/mu} dx.
// Substituting t = e^{-x/mu} maps the half-line onto (0,1]; the left endpoint
// is clipped at 1e-16, which for bounded-growth g contributes < 1e-14.
template <typename G>
double exp_expectation(G&& g, double mu = 1.0, double tol = 1e-12) {
    return integrate([&](double t) { return g(-mu * std::log(t)); }, 1e-16, 1.0, tol);
}

// Var(g(X)) under the same law.
template <typename G>
double exp_variance(G&& g, double mu = 1.0, double tol = 1e-12) {
    const double mean = exp_expectation(g, mu, tol);
    const double second = exp_expectation([&](double x) { const double v = g(x); return v * v; }, mu, tol);
    return second - mean * mean;
}

} // namespace ageing
