// SPDX-License-Identifier: Apache-2.0

#include "heston/frft.hpp"

#include "heston/characteristic.hpp"
#include "heston/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace heston {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace

FrftConfig::FrftConfig(std::size_t n, double eta, double lambda, double alpha)
    : n(n), eta(eta), lambda(lambda), alpha(alpha) {
    if (!is_pow2(n) || n < 4) throw ConfigError("grid size must be a power of two >= 4");
    if (!(eta > 0.0)) throw ConfigError("eta must be > 0");
    if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
    if (!(alpha > 0.0)) throw ConfigError("alpha must be > 0");
}

std::vector<double> simpson_weights(std::size_t n) {
    if (n < 2) throw ConfigError("Simpson weights need at least two points");
    std::vector<double> w(n, 2.0 / 3.0);
    for (std::size_t j = 1; j + 1 < n; j += 2) w[j] = 4.0 / 3.0;
    w.front() = 1.0 / 3.0;
    w.back() = 1.0 / 3.0;
    return w;
}

std::vector<double> transform_weights(std::size_t n) {
    if (n < 2) throw ConfigError("transform weights need at least two points");
    std::vector<double> w(n, 1.0);
    w.front() = 0.5;
    w.back() = 0.5;
    return w;
}

void fft_radix2(std::vector<std::complex<double>>& a, int sign) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw ConfigError("FFT length must be a power of two");
    if (sign != 1 && sign != -1) throw ConfigError("FFT sign must be +1 or -1");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> x = a[i + j];
                const std::complex<double> y = a[i + j + len / 2] * w;
                a[i + j] = x + y;
                a[i + j + len / 2] = x - y;
                w *= wl;
            }
        }
    }
}

FrftPlan::FrftPlan(std::size_t n, double beta) : n_(n), beta_(beta) {
    if (!is_pow2(n) || n < 2) throw ConfigError("transform length must be a power of two >= 2");
    const double a = beta / (2.0 * M_PI);
    chirp_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double jj = static_cast<double>(j) * static_cast<double>(j);
        const double ang = M_PI * a * jj;
        chirp_[j] = {std::cos(ang), std::sin(ang)};
    }
    zhat_.assign(2 * n, {0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) {
        zhat_[j] = std::conj(chirp_[j]);
        const double nj = static_cast<double>(n - j);
        const double ang = M_PI * a * nj * nj;
        zhat_[n + j] = {std::cos(ang), -std::sin(ang)};
    }
    fft_radix2(zhat_, -1);
}

std::vector<std::complex<double>> FrftPlan::execute(
    const std::vector<std::complex<double>>& x) const {
    if (x.size() != n_) throw ConfigError("input length does not match the plan");
    std::vector<std::complex<double>> y(2 * n_, {0.0, 0.0});
    for (std::size_t j = 0; j < n_; ++j) y[j] = x[j] * chirp_[j];
    fft_radix2(y, -1);
    for (std::size_t j = 0; j < 2 * n_; ++j) y[j] *= zhat_[j];
    fft_radix2(y, +1);
    const double norm = 1.0 / static_cast<double>(2 * n_);
    std::vector<std::complex<double>> out(n_);
    for (std::size_t u = 0; u < n_; ++u) out[u] = y[u] * norm * chirp_[u];
    return out;
}

std::vector<std::complex<double>> frft(const std::vector<std::complex<double>>& x, double beta) {
    return FrftPlan(x.size(), beta).execute(x);
}

StrikeGrid make_strike_grid(const FrftConfig& cfg, double log_spot) {
    StrikeGrid g;
    g.log_spot = log_spot;
    g.half_span = cfg.half_span();
    g.lambda = cfg.lambda;
    g.log_strikes.resize(cfg.n);
    g.strikes.resize(cfg.n);
    for (std::size_t u = 0; u < cfg.n; ++u) {
        const double k = -g.half_span + static_cast<double>(u) * cfg.lambda + log_spot;
        g.log_strikes[u] = k;
        g.strikes[u] = std::exp(k);
    }
    return g;
}

std::size_t StrikeGrid::nearest_index(double log_strike) const {
    const double t = (log_strike + half_span - log_spot) / lambda;
    const double r = std::nearbyint(t);
    if (r < 0.0) return 0;
    if (r >= static_cast<double>(size())) return size() - 1;
    return static_cast<std::size_t>(r);
}

double StrikeGrid::node_distance(double log_strike) const {
    return std::fabs(log_strikes[nearest_index(log_strike)] - log_strike);
}

namespace {

GridValues transform_grid(int epsilon, double tau, const FrftConfig& cfg, const ModelParams& p,
                          const MarketState& m, double v,
                          const std::function<std::complex<double>(std::complex<double>)>* factor) {
    if (epsilon != 1 && epsilon != -1) throw ConfigError("epsilon must be +1 or -1");
    if (!(tau > 0.0)) throw ConfigError("maturity must be > 0");
    // Both option types ride the call-side transform. The discrete sum wraps
    // log-strike with period 2*pi/eta; a direct put transform would fold the
    // deep-ITM put image back at e^{(1-alpha)*2*pi/eta} * K (3.9e-4 * K at
    // the default config), while the call-side images decay like
    // e^{-(alpha+1)*2*pi/eta}. Puts come out exactly via parity below.
    const double a = cfg.alpha;
    if (a == 0.0 || a == -1.0)
        throw GridError("damping exponent places a pole on the frequency grid");

    GridValues out;
    out.grid = make_strike_grid(cfg, m.log_price);

    const std::vector<double> w = transform_weights(cfg.n);
    const std::complex<double> i(0.0, 1.0);
    const double b = cfg.half_span();

    std::vector<std::complex<double>> x(cfg.n);
    for (std::size_t j = 0; j < cfg.n; ++j) {
        const double phi = static_cast<double>(j) * cfg.eta;
        std::complex<double> e = damped_integrand(+1, cfg.alpha, phi, tau, p, m, v);
        if (factor) {
            const std::complex<double> u = phi - i * (a + 1.0);
            e *= (*factor)(u);
        }
        // The pricing kernel exp(-i*k_u*phi_j) splits into this strike-
        // independent twiddle times the fractional kernel exp(-i*beta*u*j).
        const double ang = (b - m.log_price) * phi;
        x[j] = std::complex<double>(std::cos(ang), std::sin(ang)) * e * w[j];
    }

    const std::vector<std::complex<double>> g = frft(x, -cfg.beta());

    out.values.resize(cfg.n);
    const double pre = cfg.eta / M_PI;
    for (std::size_t u = 0; u < cfg.n; ++u)
        out.values[u] = pre * std::exp(-a * out.grid.log_strikes[u]) * g[u].real();

    // Parity converts the call grid to puts; derivative grids (factor set)
    // are type-independent because the parity gap carries no parameters.
    if (epsilon == -1 && factor == nullptr) {
        const double fwd = m.spot * std::exp(-m.dividend_yield * tau);
        const double df = std::exp(-m.rate * tau);
        for (std::size_t u = 0; u < cfg.n; ++u)
            out.values[u] += df * out.grid.strikes[u] - fwd;
    }
    return out;
}

} // namespace

GridValues price_grid(int epsilon, double tau, const FrftConfig& cfg, const ModelParams& p,
                      const MarketState& m, double v) {
    return transform_grid(epsilon, tau, cfg, p, m, v, nullptr);
}

GridValues weighted_grid(int epsilon, double tau, const FrftConfig& cfg, const ModelParams& p,
                         const MarketState& m, double v,
                         const std::function<std::complex<double>(std::complex<double>)>& factor) {
    return transform_grid(epsilon, tau, cfg, p, m, v, &factor);
}

} // namespace heston
