// SPDX-License-Identifier: Apache-2.0

#include "heston/greeks.hpp"

#include "heston/errors.hpp"
#include "heston/quadrature.hpp"

#include <cmath>

namespace heston {

CDDerivs cd_derivatives(std::complex<double> u, double tau, const ModelParams& p) {
    using cplx = std::complex<double>;
    const cplx i(0.0, 1.0);
    const double s = p.sigma;
    const double s2 = s * s;

    const cplx Q = p.kappa - i * p.rho * s * u;
    const cplx P = i * u + u * u;
    const cplx d = std::sqrt(Q * Q + s2 * P);
    const cplx G = -s2 * P / (Q + d); // Q - d without cancellation
    const cplx c = G / (Q + d);
    const cplx edt = std::exp(-d * tau);
    const cplx den = 1.0 - c * edt;
    const cplx B = G * tau - 2.0 * (log1p_complex(-c * edt) - log1p_complex(-c));

    CDDerivs out;
    out.C = (p.kappa * p.theta / s2) * B;
    out.D = (G / s2) * (1.0 - edt) / den;

    const cplx Qg[3] = {cplx(1.0, 0.0), -i * p.rho * u, -i * s * u}; // kappa, sigma, rho
    const bool sigma_term[3] = {false, true, false};

    cplx Bg[3];
    cplx Dg[3];
    for (int t = 0; t < 3; ++t) {
        const cplx dg = (Q * Qg[t] + (sigma_term[t] ? s * P : cplx(0.0))) / d;
        const cplx Gg = Qg[t] - dg;
        const cplx cg = 2.0 * (d * Qg[t] - Q * dg) / ((Q + d) * (Q + d));
        const cplx deng = edt * (tau * dg * c - cg);
        const cplx Lg = deng / den + cg / (1.0 - c);
        Bg[t] = tau * Gg - 2.0 * Lg;
        Dg[t] = (Gg * (1.0 - edt) + G * tau * dg * edt) / (s2 * den) -
                (G / s2) * (1.0 - edt) * deng / (den * den);
        if (sigma_term[t]) Dg[t] -= 2.0 * out.D / s;
    }

    const double ct = p.kappa * p.theta / s2;
    out.Ck = (p.theta / s2) * B + ct * Bg[0];
    out.Dk = Dg[0];
    out.Cth = (p.kappa / s2) * B;
    out.Cs = (-2.0 * ct / s) * B + ct * Bg[1];
    out.Ds = Dg[1];
    out.Cr = ct * Bg[2];
    out.Dr = Dg[2];
    return out;
}

std::complex<double> log_cf_partial(Greek g, const CDDerivs& cd, double v, const ModelParams& p) {
    switch (g) {
        case Greek::Sigma0: return 2.0 * std::sqrt(v) * cd.D;
        case Greek::Kappa: return cd.Ck + v * cd.Dk;
        case Greek::SqrtTheta: return 2.0 * std::sqrt(p.theta) * cd.Cth;
        case Greek::Sigma: return cd.Cs + v * cd.Ds;
        case Greek::Rho: return cd.Cr + v * cd.Dr;
    }
    throw ConfigError("unknown sensitivity coordinate");
}

namespace {

// Integrand of the sensitivity integral in price units: the damped
// transform times the log-CF partial, rotated by the strike kernel.
template <class Pick>
double greek_quadrature(const OptionSpec& opt, const ModelParams& p, const MarketState& m,
                        double v, double alpha, const QuadratureConfig& cfg, Pick&& pick) {
    const double a = opt.epsilon * alpha;
    if (a == 0.0 || a == -1.0)
        throw ConfigError("damping exponent places a pole at phi = 0 for this option type");
    const double k = opt.log_strike;
    const double pre = std::exp(-a * k) / M_PI;
    const std::complex<double> i(0.0, 1.0);
    auto g = [&](double phi) {
        const std::complex<double> u = phi - i * (a + 1.0);
        const std::complex<double> e =
            damped_integrand(opt.epsilon, alpha, phi, opt.maturity, p, m, v);
        const CDDerivs cd = cd_derivatives(u, opt.maturity, p);
        const std::complex<double> kern = std::exp(std::complex<double>(0.0, -k * phi));
        return pre * (kern * e * pick(cd)).real();
    };
    return integrate_tail(g, cfg.phi_max, cfg.abs_tol, cfg.tail_rel, cfg.max_depth,
                          cfg.max_doublings);
}

} // namespace

double greek_direct(Greek g, const OptionSpec& opt, const ModelParams& p, const MarketState& m,
                    double v, double alpha, const QuadratureConfig& cfg) {
    return greek_quadrature(opt, p, m, v, alpha, cfg,
                            [&](const CDDerivs& cd) { return log_cf_partial(g, cd, v, p); });
}

GreekVector greeks_direct(const OptionSpec& opt, const ModelParams& p, const MarketState& m,
                          double v, double alpha, const QuadratureConfig& cfg) {
    GreekVector out{};
    for (int t = 0; t < static_cast<int>(kGreekCount); ++t)
        out[t] = greek_direct(static_cast<Greek>(t), opt, p, m, v, alpha, cfg);
    return out;
}

GreekVector greeks_direct(const OptionSpec& opt, const ModelParams& p, const MarketState& m,
                          double v) {
    return greeks_direct(opt, p, m, v, 1.5, QuadratureConfig::for_spot(m.spot));
}

GridValues greek_grid(Greek g, int epsilon, double tau, const FrftConfig& cfg,
                      const ModelParams& p, const MarketState& m, double v) {
    return weighted_grid(epsilon, tau, cfg, p, m, v,
                         [&](std::complex<double> u) {
                             const CDDerivs cd = cd_derivatives(u, tau, p);
                             return log_cf_partial(g, cd, v, p);
                         });
}

std::array<GridValues, kGreekCount> greek_grids(int epsilon, double tau, const FrftConfig& cfg,
                                                const ModelParams& p, const MarketState& m,
                                                double v) {
    if (epsilon != 1 && epsilon != -1) throw ConfigError("epsilon must be +1 or -1");
    if (!(tau > 0.0)) throw ConfigError("maturity must be > 0");
    // Sensitivity grids ride the call-side transform for either option type:
    // the parity gap carries no model parameters, and the call-side aliasing
    // images are the smaller ones (see transform_grid).
    const double a = cfg.alpha;
    if (a == 0.0 || a == -1.0)
        throw GridError("damping exponent places a pole on the frequency grid");

    const StrikeGrid grid = make_strike_grid(cfg, m.log_price);
    const std::vector<double> w = transform_weights(cfg.n);
    const std::complex<double> i(0.0, 1.0);
    const double b = cfg.half_span();

    std::array<std::vector<std::complex<double>>, kGreekCount> inputs;
    for (auto& in : inputs) in.resize(cfg.n);
    for (std::size_t j = 0; j < cfg.n; ++j) {
        const double phi = static_cast<double>(j) * cfg.eta;
        const std::complex<double> u = phi - i * (a + 1.0);
        const std::complex<double> e = damped_integrand(+1, cfg.alpha, phi, tau, p, m, v);
        const CDDerivs cd = cd_derivatives(u, tau, p);
        const double ang = (b - m.log_price) * phi;
        const std::complex<double> base =
            std::complex<double>(std::cos(ang), std::sin(ang)) * e * w[j];
        for (int t = 0; t < static_cast<int>(kGreekCount); ++t)
            inputs[t][j] = base * log_cf_partial(static_cast<Greek>(t), cd, v, p);
    }

    const FrftPlan plan(cfg.n, -cfg.beta());
    std::array<GridValues, kGreekCount> out;
    const double pre = cfg.eta / M_PI;
    for (int t = 0; t < static_cast<int>(kGreekCount); ++t) {
        const std::vector<std::complex<double>> g = plan.execute(inputs[t]);
        out[t].grid = grid;
        out[t].values.resize(cfg.n);
        for (std::size_t u = 0; u < cfg.n; ++u)
            out[t].values[u] = pre * std::exp(-a * grid.log_strikes[u]) * g[u].real();
    }
    return out;
}

} // namespace heston
