// SPDX-License-Identifier: Apache-2.0

#ifndef HESTON_TYPES_HPP
#define HESTON_TYPES_HPP

#include "heston/dates.hpp"
#include "heston/errors.hpp"

#include <cmath>
#include <string>

namespace heston {

// Hidden parameters of the variance process.
//
//   kappa  mean-reversion speed (1/years)
//   theta  long-run variance
//   sigma  volatility of variance (1/sqrt(years))
//   rho    spot/variance correlation
//
// The Feller condition 2*kappa*theta >= sigma^2 is not required; it is
// exposed as a diagnostic only.
struct ModelParams {
    double kappa;
    double theta;
    double sigma;
    double rho;

    ModelParams(double kappa, double theta, double sigma, double rho)
        : kappa(kappa), theta(theta), sigma(sigma), rho(rho) {
        if (!(kappa > 0.0)) throw ConfigError("kappa must be > 0");
        if (!(theta > 0.0)) throw ConfigError("theta must be > 0");
        if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");
        if (!(rho >= -1.0 && rho <= 1.0)) throw ConfigError("rho must lie in [-1, 1]");
    }

    bool feller_satisfied() const { return 2.0 * kappa * theta >= sigma * sigma; }

    double sqrt_theta() const { return std::sqrt(theta); }
};

// Per-day market observables.
struct MarketState {
    Date date;
    double spot;           // > 0
    double log_price;      // log(spot)
    double rate;           // continuously compounded zero-coupon rate
    double dividend_yield;

    MarketState(Date date, double spot, double rate, double dividend_yield)
        : date(date), spot(spot), log_price(std::log(spot)), rate(rate),
          dividend_yield(dividend_yield) {
        if (!(spot > 0.0)) throw ConfigError("spot must be > 0");
    }
};

// European option contract: epsilon = +1 call, -1 put.
struct OptionSpec {
    int epsilon;
    double strike;
    double log_strike;
    double maturity; // years, > 0

    OptionSpec(int epsilon, double strike, double maturity)
        : epsilon(epsilon), strike(strike), log_strike(std::log(strike)),
          maturity(maturity) {
        if (epsilon != 1 && epsilon != -1) throw ConfigError("epsilon must be +1 or -1");
        if (!(strike > 0.0)) throw ConfigError("strike must be > 0");
        if (!(maturity > 0.0)) throw ConfigError("maturity must be > 0");
    }

    static OptionSpec call(double strike, double maturity) { return {+1, strike, maturity}; }
    static OptionSpec put(double strike, double maturity) { return {-1, strike, maturity}; }

    bool is_call() const { return epsilon == +1; }
};

// Controls for the adaptive reference pricer. abs_tol is an absolute
// tolerance on the price; phi_max is the initial truncation bound, doubled
// until the last chunk contributes < tail_rel of the running integral.
struct QuadratureConfig {
    double abs_tol = 1e-10;   // scaled by spot at the call site
    double phi_max = 200.0;
    double tail_rel = 1e-12;
    int max_depth = 48;
    int max_doublings = 8;

    static QuadratureConfig for_spot(double spot) {
        QuadratureConfig q;
        q.abs_tol = 1e-10 * spot;
        return q;
    }
    // Tight settings for use as a finite-difference oracle.
    static QuadratureConfig tight(double spot) {
        QuadratureConfig q;
        q.abs_tol = 1e-13 * spot;
        return q;
    }
};

} // namespace heston

#endif // HESTON_TYPES_HPP
