// SPDX-License-Identifier: Apache-2.0

#include "heston/pricing.hpp"

#include "heston/characteristic.hpp"
#include "heston/errors.hpp"
#include "heston/quadrature.hpp"

#include <cmath>
#include <complex>

namespace heston {

double price_direct(const OptionSpec& opt, const ModelParams& p, const MarketState& m, double v,
                    double alpha, const QuadratureConfig& cfg) {
    if (!(alpha > 0.0)) throw ConfigError("alpha must be > 0");
    if (!(v >= 0.0)) throw ConfigError("variance must be >= 0");
    const double a = opt.epsilon * alpha;
    if (a == 0.0 || a == -1.0)
        throw ConfigError("damping exponent places a pole at phi = 0 for this option type");

    const double k = opt.log_strike;
    const double pre = std::exp(-a * k) / M_PI;
    auto g = [&](double phi) {
        const std::complex<double> e =
            damped_integrand(opt.epsilon, alpha, phi, opt.maturity, p, m, v);
        const std::complex<double> kern = std::exp(std::complex<double>(0.0, -k * phi));
        return pre * (kern * e).real();
    };
    return integrate_tail(g, cfg.phi_max, cfg.abs_tol, cfg.tail_rel, cfg.max_depth,
                          cfg.max_doublings);
}

double price_direct(const OptionSpec& opt, const ModelParams& p, const MarketState& m, double v) {
    return price_direct(opt, p, m, v, 1.5, QuadratureConfig::for_spot(m.spot));
}

double put_from_call(double call, double strike, double maturity, const MarketState& m) {
    return call + strike * std::exp(-m.rate * maturity) -
           m.spot * std::exp(-m.dividend_yield * maturity);
}

double forward_price(double maturity, const MarketState& m) {
    return m.spot * std::exp((m.rate - m.dividend_yield) * maturity);
}

} // namespace heston
