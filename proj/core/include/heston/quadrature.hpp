// SPDX-License-Identifier: Apache-2.0

#ifndef HESTON_QUADRATURE_HPP
#define HESTON_QUADRATURE_HPP

#include "heston/errors.hpp"

#include <cmath>
#include <utility>

namespace heston {

namespace detail {

template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth, bool& converged) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) {
        converged = false;
        return left + right;
    }
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, converged) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, converged);
}

} // namespace detail

// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
// Sets converged = false (and returns the best partial estimate) if the
// recursion depth runs out before the local error bound is met.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth, bool& converged) {
    converged = true;
    const double fa = f(a);
    const double fm = f(0.5 * (a + b));
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth, converged);
}

// Semi-infinite oscillatory integral: integrates f on [0, phi_max], then
// appends doubling chunks until the last chunk is negligible relative to
// the running total. Throws IntegrationError carrying the partial value if
// the tail refuses to decay or the panel quadrature stalls.
template <class F>
double integrate_tail(F&& f, double phi_max, double abs_tol, double tail_rel, int max_depth,
                      int max_doublings) {
    bool ok = true;
    double total = adaptive_simpson(f, 0.0, phi_max, abs_tol, max_depth, ok);
    if (!ok) throw IntegrationError("quadrature failed to converge on the head panel", total);

    double lo = phi_max;
    for (int n = 0; n < max_doublings; ++n) {
        const double hi = 2.0 * lo;
        const double chunk = adaptive_simpson(f, lo, hi, abs_tol, max_depth, ok);
        if (!ok) throw IntegrationError("quadrature failed to converge on a tail panel", total);
        total += chunk;
        lo = hi;
        if (std::fabs(chunk) <= tail_rel * (std::fabs(total) + abs_tol)) return total;
    }
    throw IntegrationError("integrand tail failed to decay", total);
}

} // namespace heston

#endif // HESTON_QUADRATURE_HPP
