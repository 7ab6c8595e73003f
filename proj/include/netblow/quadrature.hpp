#pragma once

#include <cmath>
#include <utility>

namespace netblow {

namespace detail {

template <class F>
double simpson_rec(F& f, double a, double m, double b, double fa, double fm, double fb,
                   double whole, double abs_tol, double rel_tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (!std::isfinite(delta)) return left + right;  // non-finite integrand: stop refining
    const double tol = std::max(abs_tol, rel_tol * std::abs(left + right));
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * abs_tol, rel_tol, depth - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * abs_tol, rel_tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature, abs_tol 1e-12 / rel_tol 1e-10 by default.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol = 1e-12,
                        double rel_tol = 1e-10) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, m, b, fa, fm, fb, whole, abs_tol, rel_tol, 48);
}

}  // namespace netblow
