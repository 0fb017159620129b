// SPDX-License-Identifier: Apache-2.0

#ifndef HESTON_GREEKS_HPP
#define HESTON_GREEKS_HPP

#include "heston/characteristic.hpp"
#include "heston/frft.hpp"
#include "heston/types.hpp"

#include <array>
#include <complex>

namespace heston {

// Parameters the price is differentiated against, in reporting order. The
// day-specific coordinate is sigma0 = sqrt(v); the long-run level is
// reported as sqrt(theta). Both square roots put the entries on a
// volatility scale.
enum class Greek : int { Sigma0 = 0, Kappa = 1, SqrtTheta = 2, Sigma = 3, Rho = 4 };

inline constexpr std::size_t kGreekCount = 5;

using GreekVector = std::array<double, kGreekCount>;

constexpr const char* greek_label(Greek g) {
    constexpr const char* names[kGreekCount] = {"sigma0", "kappa", "sqrt_theta", "sigma", "rho"};
    return names[static_cast<int>(g)];
}

// C, D and their parameter partials at one transform argument. Partials
// are taken in the raw coordinates (kappa, theta, sigma, rho); D does not
// depend on theta.
struct CDDerivs {
    std::complex<double> C, D;
    std::complex<double> Ck, Dk;
    std::complex<double> Cth;
    std::complex<double> Cs, Ds;
    std::complex<double> Cr, Dr;
};

CDDerivs cd_derivatives(std::complex<double> u, double tau, const ModelParams& p);

// Logarithmic derivative of the characteristic function with respect to
// the reporting coordinate g, evaluated from precomputed partials.
std::complex<double> log_cf_partial(Greek g, const CDDerivs& cd, double v, const ModelParams& p);

// Price sensitivities by adaptive quadrature (reference path).
double greek_direct(Greek g, const OptionSpec& opt, const ModelParams& p, const MarketState& m,
                    double v, double alpha, const QuadratureConfig& cfg);

GreekVector greeks_direct(const OptionSpec& opt, const ModelParams& p, const MarketState& m,
                          double v, double alpha, const QuadratureConfig& cfg);

GreekVector greeks_direct(const OptionSpec& opt, const ModelParams& p, const MarketState& m,
                          double v);

// Grid of one sensitivity across all strikes, single transform. Put and
// call sensitivities coincide (parity), so epsilon does not change the
// output.
GridValues greek_grid(Greek g, int epsilon, double tau, const FrftConfig& cfg,
                      const ModelParams& p, const MarketState& m, double v);

// All five sensitivity grids over one shared strike grid. The coefficient
// partials are evaluated once per frequency node and reused across the
// five transforms; use this when a full gradient is needed per strike.
std::array<GridValues, kGreekCount> greek_grids(int epsilon, double tau, const FrftConfig& cfg,
                                                const ModelParams& p, const MarketState& m,
                                                double v);

} // namespace heston

#endif // HESTON_GREEKS_HPP
