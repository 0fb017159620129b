// SPDX-License-Identifier: Apache-2.0

#include "heston/characteristic.hpp"

#include "heston/errors.hpp"

#include <cmath>

namespace heston {

namespace {

bool finite(const std::complex<double>& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

} // namespace

std::complex<double> log1p_complex(const std::complex<double>& z) {
    // Series branch keeps absolute error O(|z| eps); plain log loses eps
    // absolute, which the kappa*theta/sigma^2 factor amplifies when sigma
    // is small and |z| ~ sigma^2.
    if (std::abs(z) < 1e-4) {
        return z * (1.0 + z * (-0.5 + z * (1.0 / 3.0 + z * -0.25)));
    }
    return std::log(1.0 + z);
}

CDPair cd_coefficients(std::complex<double> u, double tau, const ModelParams& p, double rate,
                       double dividend) {
    if (!(tau >= 0.0)) throw ConfigError("tau must be >= 0");
    const std::complex<double> i(0.0, 1.0);
    const double s2 = p.sigma * p.sigma;

    const std::complex<double> Q = p.kappa - i * p.rho * p.sigma * u;
    const std::complex<double> P = i * u + u * u;
    const std::complex<double> d = std::sqrt(Q * Q + s2 * P);

    // G = Q - d computed without cancellation: (Q-d)(Q+d) = -sigma^2 P.
    const std::complex<double> G = -s2 * P / (Q + d);
    const std::complex<double> c = G / (Q + d);

    const std::complex<double> edt = std::exp(-d * tau);
    const std::complex<double> den = 1.0 - c * edt;

    // Both 1 - c*edt and 1 - c lie in the closed right half-plane (|c| <= 1,
    // Re d >= 0), so the principal-branch logs difference without winding.
    const std::complex<double> log_ratio = log1p_complex(-c * edt) - log1p_complex(-c);

    CDPair out;
    out.D = (G / s2) * (1.0 - edt) / den;
    out.C = i * u * (rate - dividend) * tau +
            (p.kappa * p.theta / s2) * (G * tau - 2.0 * log_ratio);

    if (!finite(out.C) || !finite(out.D))
        throw DomainError("characteristic exponent is non-finite", u.real(), u.imag());
    return out;
}

std::complex<double> char_fn(std::complex<double> u, double tau, const ModelParams& p,
                             const MarketState& m, double v) {
    const std::complex<double> i(0.0, 1.0);
    const CDPair cd = cd_coefficients(u, tau, p, m.rate, m.dividend_yield);
    const std::complex<double> f = std::exp(cd.C + cd.D * v + i * u * m.log_price);
    if (!finite(f))
        throw DomainError("characteristic function overflow", u.real(), u.imag());
    return f;
}

std::complex<double> damping_denominator(int epsilon, double alpha, double phi) {
    const double a = epsilon * alpha;
    return {a * a + a - phi * phi, phi * (2.0 * a + 1.0)};
}

std::complex<double> damped_integrand(int epsilon, double alpha, double phi, double tau,
                                      const ModelParams& p, const MarketState& m, double v) {
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> u = phi - i * (epsilon * alpha + 1.0);
    const std::complex<double> denom = damping_denominator(epsilon, alpha, phi);
    const std::complex<double> f = char_fn(u, tau, p, m, v);
    return std::exp(-m.rate * tau) * f / denom;
}

std::complex<double> damped_integrand(int epsilon, const DampedIntegrandParams& dp, double phi,
                                      double tau, const ModelParams& p, const MarketState& m) {
    return damped_integrand(epsilon, dp.alpha, phi, tau, p, m, dp.variance);
}

} // namespace heston
