// SPDX-License-Identifier: Apache-2.0

#ifndef HESTON_PRICING_HPP
#define HESTON_PRICING_HPP

#include "heston/types.hpp"

namespace heston {

// Reference price by adaptive quadrature of the damped transform. Accurate
// to roughly cfg.abs_tol; intended as the slow, trusted path that grid
// pricers and calibration fall back on.
double price_direct(const OptionSpec& opt, const ModelParams& p, const MarketState& m, double v,
                    double alpha, const QuadratureConfig& cfg);

double price_direct(const OptionSpec& opt, const ModelParams& p, const MarketState& m, double v);

// Put price from the call price at the same strike and maturity.
double put_from_call(double call, double strike, double maturity, const MarketState& m);

// Black-Scholes limit check helper: forward price of the underlying.
double forward_price(double maturity, const MarketState& m);

} // namespace heston

#endif // HESTON_PRICING_HPP
