// SPDX-License-Identifier: Apache-2.0

#ifndef HESTON_FRFT_HPP
#define HESTON_FRFT_HPP

#include "heston/types.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace heston {

// Frequency/strike grid configuration for the fractional-FFT pricer. The
// frequency spacing eta and log-strike spacing lambda are decoupled; their
// product beta = eta * lambda is the transform's fractional step and is not
// required to equal 2*pi/n.
struct FrftConfig {
    std::size_t n = 2048;
    double eta = 0.4;
    double lambda = 3.6549e-4;
    double alpha = 1.5;

    FrftConfig() = default;
    FrftConfig(std::size_t n, double eta, double lambda, double alpha);

    double beta() const { return eta * lambda; }
    double half_span() const { return 0.5 * static_cast<double>(n) * lambda; }
};

// Composite Simpson weights for an n-point panel sum, n >= 2:
// endpoints 1/3, odd interior 4/3, even interior 2/3.
std::vector<double> simpson_weights(std::size_t n);

// Endpoint-halved (trapezoid) weights used by the grid transforms. For the
// damped transform the trapezoid sum is alias-limited (images sit 2*pi/eta
// away in log-strike), while the alternating component of the Simpson
// weights folds the deep-ITM image at pi/eta back into the strike window at
// ~1e-3 * S for eta = 0.4, which would dominate the grid error budget.
std::vector<double> transform_weights(std::size_t n);

// In-place radix-2 transform: a_k <- sum_j a_j exp(sign * 2*pi*i*j*k / n).
// No normalization; n must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a, int sign);

// Fractional Fourier transform G_u = sum_{j<n} x_j exp(i * beta * u * j)
// for u = 0..n-1, evaluated with the 2n-point chirp-z convolution.
std::vector<std::complex<double>> frft(const std::vector<std::complex<double>>& x, double beta);

// Reusable plan: precomputes the chirp vectors and the transformed
// convolution kernel for a fixed (n, beta).
class FrftPlan {
  public:
    FrftPlan(std::size_t n, double beta);

    std::size_t size() const { return n_; }
    double beta() const { return beta_; }

    std::vector<std::complex<double>> execute(const std::vector<std::complex<double>>& x) const;

  private:
    std::size_t n_;
    double beta_;
    std::vector<std::complex<double>> chirp_; // exp(i*pi*a*j^2), j < n
    std::vector<std::complex<double>> zhat_;  // DFT of the convolution kernel, length 2n
};

// Uniform log-strike grid centred on the log spot: k_u = -b + u*lambda + x
// with b = n*lambda/2, so k_{n/2} = x exactly.
struct StrikeGrid {
    double log_spot = 0.0;
    double half_span = 0.0;
    double lambda = 0.0;
    std::vector<double> log_strikes;
    std::vector<double> strikes;

    std::size_t size() const { return log_strikes.size(); }
    std::size_t spot_index() const { return size() / 2; }

    // Index of the grid node nearest to log-strike k, plus its distance.
    std::size_t nearest_index(double log_strike) const;
    double node_distance(double log_strike) const;
};

StrikeGrid make_strike_grid(const FrftConfig& cfg, double log_spot);

struct GridValues {
    StrikeGrid grid;
    std::vector<double> values;
};

// Prices of epsilon-type options with maturity tau at every grid strike,
// one transform. Puts are obtained from the call-side transform via parity:
// a direct eps = -1 transform folds its deep-ITM image back into the strike
// window at e^{(1-alpha)*2*pi/eta} * K, far above the call-side image error.
GridValues price_grid(int epsilon, double tau, const FrftConfig& cfg, const ModelParams& p,
                      const MarketState& m, double v);

// Same machinery with an extra frequency-domain factor applied to the
// damped transform at the shifted argument u = phi - i(alpha + 1); used for
// parameter-derivative grids. The output is epsilon-independent (the parity
// gap carries no model parameters).
GridValues weighted_grid(int epsilon, double tau, const FrftConfig& cfg, const ModelParams& p,
                         const MarketState& m, double v,
                         const std::function<std::complex<double>(std::complex<double>)>& factor);

} // namespace heston

#endif // HESTON_FRFT_HPP
