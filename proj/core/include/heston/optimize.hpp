// SPDX-License-Identifier: Apache-2.0

#ifndef HESTON_OPTIMIZE_HPP
#define HESTON_OPTIMIZE_HPP

#include <cmath>
#include <utility>

namespace heston {

// Brent minimization (golden section with parabolic steps) of f on [a, b].
// Returns (argmin, min). Terminates when the bracket shrinks below
// xtol + |x| * xtol or max_iter is reached; the objective is assumed
// unimodal on the bracket (callers scan for the bracket first).
template <class F>
std::pair<double, double> brent_minimize(F&& f, double a, double b, double xtol,
                                         int max_iter = 200) {
    constexpr double gold = 0.3819660112501051;
    double x = a + gold * (b - a);
    double w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;

    for (int iter = 0; iter < max_iter; ++iter) {
        const double m = 0.5 * (a + b);
        const double tol = xtol * std::fabs(x) + xtol;
        if (std::fabs(x - m) <= 2.0 * tol - 0.5 * (b - a)) break;

        bool parabolic = false;
        if (std::fabs(e) > tol) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::fabs(q);
            const double e_old = e;
            e = d;
            if (std::fabs(p) < std::fabs(0.5 * q * e_old) && p > q * (a - x) &&
                p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < 2.0 * tol || b - u < 2.0 * tol) d = (x < m) ? tol : -tol;
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x < m) ? b - x : a - x;
            d = gold * e;
        }
        const double u = (std::fabs(d) >= tol) ? x + d : x + ((d > 0.0) ? tol : -tol);
        const double fu = f(u);

        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return {x, fx};
}

} // namespace heston

#endif // HESTON_OPTIMIZE_HPP
