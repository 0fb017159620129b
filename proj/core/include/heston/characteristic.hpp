// SPDX-License-Identifier: Apache-2.0

#ifndef HESTON_CHARACTERISTIC_HPP
#define HESTON_CHARACTERISTIC_HPP

#include "heston/types.hpp"

#include <complex>

namespace heston {

// Exponent coefficients of the conditional characteristic function in the
// branch-stable formulation: the log-CF is
//
//   log f(u) = C(u,tau) + D(u,tau) v + i u x
//
// where x is the log spot and v the current variance. C carries the
// risk-neutral drift term i u (r - q) tau. All branch cuts are principal;
// tau = 0 yields C = D = 0.
struct CDPair {
    std::complex<double> C;
    std::complex<double> D;
};

CDPair cd_coefficients(std::complex<double> u, double tau, const ModelParams& p, double rate,
                       double dividend);

// log(1 + z) with absolute error O(|z| eps) for small |z|; principal branch.
std::complex<double> log1p_complex(const std::complex<double>& z);

// Full characteristic function of log spot at maturity tau.
std::complex<double> char_fn(std::complex<double> u, double tau, const ModelParams& p,
                             const MarketState& m, double v);

// Damping factor and variance bundled for transform evaluation.
struct DampedIntegrandParams {
    double alpha;
    double variance;

    DampedIntegrandParams(double alpha, double variance) : alpha(alpha), variance(variance) {
        if (!(alpha > 0.0)) throw ConfigError("alpha must be > 0");
        if (!(variance >= 0.0)) throw ConfigError("variance must be >= 0");
    }
};

// Damped, discounted transform of the option payoff evaluated at real
// frequency phi: the integrand of the damped pricing integral. epsilon is
// +1 for calls, -1 for puts.
std::complex<double> damped_integrand(int epsilon, double alpha, double phi, double tau,
                                      const ModelParams& p, const MarketState& m, double v);

std::complex<double> damped_integrand(int epsilon, const DampedIntegrandParams& dp, double phi,
                                      double tau, const ModelParams& p, const MarketState& m);

// Denominator of the damped transform; vanishes only where the damped
// payoff transform has its poles. Exposed so grid constructors can reject
// configurations that would evaluate on a pole.
std::complex<double> damping_denominator(int epsilon, double alpha, double phi);

} // namespace heston

#endif // HESTON_CHARACTERISTIC_HPP
