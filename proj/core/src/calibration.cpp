// SPDX-License-Identifier: Apache-2.0

#include "heston/calibration.hpp"

#include "heston/characteristic.hpp"
#include "heston/errors.hpp"
#include "heston/optimize.hpp"
#include "heston/parallel.hpp"
#include "heston/pricing.hpp"

#include <algorithm>
#include <cmath>

namespace heston {

ChainPricer::ChainPricer(const DayChain& chain, const ModelParams& p, const FrftConfig& cfg,
                         double node_tol)
    : params_(p), state_(chain.state), cfg_(cfg), plan_(cfg.n, -cfg.beta()) {
    const double a = cfg.alpha;
    if (a == 0.0 || a == -1.0)
        throw GridError("damping exponent places a pole on the frequency grid");

    std::vector<const OptionQuote*> admitted;
    for (const OptionQuote& q : chain.quotes) {
        if (!q.admitted()) continue;
        admitted.push_back(&q);
        observed_.push_back(q.observed);
    }

    const StrikeGrid grid = make_strike_grid(cfg_, state_.log_price);
    const std::vector<double> w = transform_weights(cfg_.n);
    const std::complex<double> i(0.0, 1.0);
    const double b = cfg_.half_span();
    const double x = state_.log_price;

    for (std::size_t oi = 0; oi < admitted.size(); ++oi) {
        const OptionQuote& q = *admitted[oi];
        if (grid.node_distance(q.spec.log_strike) >= node_tol) {
            fallback_specs_.push_back(q.spec);
            fallback_index_.push_back(oi);
            continue;
        }
        auto it = std::find_if(buckets_.begin(), buckets_.end(),
                               [&](const Bucket& bk) { return bk.tau == q.spec.maturity; });
        if (it == buckets_.end()) {
            Bucket bk;
            bk.tau = q.spec.maturity;
            bk.base.resize(cfg_.n);
            bk.dcoef.resize(cfg_.n);
            const double disc = std::exp(-state_.rate * bk.tau);
            for (std::size_t j = 0; j < cfg_.n; ++j) {
                const double phi = static_cast<double>(j) * cfg_.eta;
                const std::complex<double> u = phi - i * (a + 1.0);
                const CDPair cd =
                    cd_coefficients(u, bk.tau, params_, state_.rate, state_.dividend_yield);
                const std::complex<double> denom = damping_denominator(+1, a, phi);
                const std::complex<double> fixed =
                    disc * std::exp(cd.C + i * u * x) / denom;
                const double ang = (b - x) * phi;
                bk.base[j] =
                    std::complex<double>(std::cos(ang), std::sin(ang)) * fixed * w[j];
                bk.dcoef[j] = cd.D;
            }
            buckets_.push_back(std::move(bk));
            it = buckets_.end() - 1;
        }
        const std::size_t u = grid.nearest_index(q.spec.log_strike);
        it->quote_index.push_back(oi);
        it->node_index.push_back(u);
        it->node_prefactor.push_back(cfg_.eta / M_PI * std::exp(-a * grid.log_strikes[u]));
    }
}

void ChainPricer::set_observed(std::vector<double> observed) {
    if (observed.size() != observed_.size())
        throw ConfigError("observed price count does not match the admitted calls");
    observed_ = std::move(observed);
}

std::vector<double> ChainPricer::prices(double v) const {
    if (!(v >= 0.0)) throw ConfigError("variance must be >= 0");
    std::vector<double> out(observed_.size(), 0.0);
    std::vector<std::complex<double>> xin(cfg_.n);
    for (const Bucket& bk : buckets_) {
        for (std::size_t j = 0; j < cfg_.n; ++j) xin[j] = bk.base[j] * std::exp(bk.dcoef[j] * v);
        const std::vector<std::complex<double>> g = plan_.execute(xin);
        for (std::size_t t = 0; t < bk.quote_index.size(); ++t)
            out[bk.quote_index[t]] = bk.node_prefactor[t] * g[bk.node_index[t]].real();
    }
    for (std::size_t t = 0; t < fallback_specs_.size(); ++t)
        out[fallback_index_[t]] = price_direct(fallback_specs_[t], params_, state_, v,
                                               cfg_.alpha, QuadratureConfig::for_spot(state_.spot));
    return out;
}

double ChainPricer::objective(double v) const {
    const std::vector<double> model = prices(v);
    double s = 0.0;
    for (std::size_t t = 0; t < model.size(); ++t) {
        const double r = observed_[t] - model[t];
        s += r * r;
    }
    return s;
}

std::vector<double> ChainPricer::residuals(double v) const {
    std::vector<double> r = prices(v);
    for (std::size_t t = 0; t < r.size(); ++t) r[t] = observed_[t] - r[t];
    return r;
}

namespace {

// Log-spaced scan over [lo, hi]; returns the index of the global minimum
// and whether more than one strict local minimum was seen.
struct ScanResult {
    std::vector<double> vs;
    std::size_t best = 0;
    bool multimodal = false;
};

ScanResult scan_objective(const ChainPricer& pricer, double lo, double hi, int points) {
    ScanResult sr;
    sr.vs.resize(points);
    std::vector<double> fs(points);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int t = 0; t < points; ++t) {
        sr.vs[t] = std::exp(llo + (lhi - llo) * t / double(points - 1));
        fs[t] = pricer.objective(sr.vs[t]);
        if (fs[t] < fs[sr.best]) sr.best = t;
    }
    int local_minima = 0;
    for (int t = 1; t + 1 < points; ++t)
        if (fs[t] < fs[t - 1] && fs[t] < fs[t + 1]) ++local_minima;
    sr.multimodal = local_minima > 1;
    return sr;
}

} // namespace

DayFit fit_day_variance(const DayChain& chain, const ModelParams& p, const FitOptions& opt) {
    return fit_variance(ChainPricer(chain, p, opt.grid, opt.node_tol), opt);
}

DayFit fit_variance(const ChainPricer& pricer, const FitOptions& opt) {
    if (!(opt.v_lo >= 0.0) || !(opt.v_lo < opt.v_hi))
        throw ConfigError("variance bounds must satisfy 0 <= v_lo < v_hi");
    if (pricer.call_count() == 0)
        throw DayError("no admitted call quotes to fit", pricer.state().date.iso());

    DayFit fit;
    fit.call_count = pricer.call_count();

    double lo = std::max(opt.v_lo, opt.scan_lo);
    double hi = std::min(opt.v_hi, opt.scan_hi);
    if (opt.bracket_hint) {
        lo = std::max(opt.v_lo, *opt.bracket_hint / opt.hint_width);
        hi = std::min(opt.v_hi, *opt.bracket_hint * opt.hint_width);
    } else {
        const ScanResult sr = scan_objective(pricer, lo, hi, opt.scan_points);
        fit.bracket_warning = sr.multimodal;
        lo = (sr.best == 0) ? opt.v_lo : sr.vs[sr.best - 1];
        hi = (sr.best + 1 == sr.vs.size()) ? opt.v_hi : sr.vs[sr.best + 1];
    }

    auto f = [&](double v) { return pricer.objective(v); };
    auto [v, obj] = brent_minimize(f, lo, hi, opt.xtol);

    // A minimum pinned to the bracket edge means the hint bracket missed;
    // rescan once over the full range before accepting.
    const double edge = 1e-3 * (hi - lo);
    if (opt.bracket_hint && (v - lo < edge || hi - v < edge)) {
        const ScanResult sr = scan_objective(pricer, std::max(opt.v_lo, opt.scan_lo),
                                             std::min(opt.v_hi, opt.scan_hi), opt.scan_points);
        fit.bracket_warning = sr.multimodal;
        const double rlo = (sr.best == 0) ? opt.v_lo : sr.vs[sr.best - 1];
        const double rhi = (sr.best + 1 == sr.vs.size()) ? opt.v_hi : sr.vs[sr.best + 1];
        std::tie(v, obj) = brent_minimize(f, rlo, rhi, opt.xtol);
    }

    fit.variance = v;
    fit.objective = obj;
    return fit;
}

double estimate_noise_variance(const CalibrationResult& result) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t d = 0; d < result.residuals.size(); ++d) {
        if (!result.ok[d]) continue;
        for (double r : result.residuals[d]) sum += r * r;
        n += result.residuals[d].size();
    }
    if (n == 0) throw ConfigError("no admitted call quotes in any fitted day");
    return sum / static_cast<double>(n);
}

CalibrationResult fit_panel(const std::vector<DayChain>& panel, const ModelParams& p,
                            const FitOptions& opt) {
    if (panel.empty()) throw ConfigError("empty panel");
    const std::size_t m = panel.size();
    CalibrationResult out;
    out.dates.reserve(m);
    for (const DayChain& day : panel) out.dates.push_back(day.state.date);
    out.ok.assign(m, 0);
    out.variances.assign(m, 0.0);
    out.objectives.assign(m, 0.0);
    out.call_counts.assign(m, 0);
    out.residuals.assign(m, {});
    std::vector<std::string> errors(m);

    parallel_for(m, [&](std::size_t d) {
        try {
            const ChainPricer pricer(panel[d], p, opt.grid, opt.node_tol);
            const DayFit fit = fit_variance(pricer, opt);
            out.variances[d] = fit.variance;
            out.objectives[d] = fit.objective;
            out.call_counts[d] = fit.call_count;
            out.residuals[d] = pricer.residuals(fit.variance);
            out.ok[d] = 1;
        } catch (const std::exception& ex) {
            errors[d] = ex.what();
        }
    });

    for (std::size_t d = 0; d < m; ++d)
        if (!out.ok[d]) out.failures.push_back(out.dates[d].iso() + ": " + errors[d]);
    out.noise_variance = estimate_noise_variance(out);
    return out;
}

} // namespace heston
