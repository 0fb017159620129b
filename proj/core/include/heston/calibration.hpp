// SPDX-License-Identifier: Apache-2.0

#ifndef HESTON_CALIBRATION_HPP
#define HESTON_CALIBRATION_HPP

#include "heston/frft.hpp"
#include "heston/types.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace heston {

// One quoted option. observed is the price used for fitting (the mid by
// default). Quotes are admitted to the variance fit only if they are calls
// with bid > 0 and observed > 0.
struct OptionQuote {
    OptionSpec spec;
    double bid;
    double ask;
    double mid;
    double observed;

    OptionQuote(OptionSpec spec, double bid, double ask)
        : spec(spec), bid(bid), ask(ask), mid(0.5 * (bid + ask)), observed(mid) {
        validate();
    }
    OptionQuote(OptionSpec spec, double bid, double ask, double observed)
        : spec(spec), bid(bid), ask(ask), mid(0.5 * (bid + ask)), observed(observed) {
        validate();
    }

    bool admitted() const { return spec.is_call() && bid > 0.0 && observed > 0.0; }

  private:
    void validate() const {
        if (!(bid >= 0.0)) throw ConfigError("bid must be >= 0");
        if (!(ask >= bid)) throw ConfigError("ask must be >= bid");
    }
};

// All quotes of one trade date, sharing that day's market state.
struct DayChain {
    MarketState state;
    std::vector<OptionQuote> quotes;
};

// Prices a day's admitted call quotes repeatedly as a function of the trial
// variance. Everything that does not depend on v (transform coefficients,
// Simpson weights, chirp plans, node lookups) is precomputed once; each
// evaluation costs one complex exponential per frequency node plus one
// fractional transform per maturity bucket. Quotes whose strike misses the
// grid nodes fall back to the adaptive-quadrature pricer.
class ChainPricer {
  public:
    ChainPricer(const DayChain& chain, const ModelParams& p, const FrftConfig& cfg,
                double node_tol = 1e-9);

    std::size_t call_count() const { return observed_.size(); }

    const MarketState& state() const { return state_; }

    const std::vector<double>& observed() const { return observed_; }

    // Replaces the observed prices (admission order preserved); the cached
    // transform coefficients are unaffected. Used by noise-replication
    // studies to refit without rebuilding the pricer.
    void set_observed(std::vector<double> observed);

    // Model prices of the admitted calls at variance v, in admission order.
    std::vector<double> prices(double v) const;

    // Sum of squared residuals of the admitted calls at variance v.
    double objective(double v) const;

    // Residuals observed - model at variance v, in admission order.
    std::vector<double> residuals(double v) const;

  private:
    struct Bucket {
        double tau;
        std::vector<std::complex<double>> base; // v-independent transform input
        std::vector<std::complex<double>> dcoef;
        std::vector<std::size_t> quote_index;
        std::vector<std::size_t> node_index;
        std::vector<double> node_prefactor;
    };

    ModelParams params_;
    MarketState state_;
    FrftConfig cfg_;
    FrftPlan plan_;
    std::vector<Bucket> buckets_;
    std::vector<double> observed_;
    std::vector<OptionSpec> fallback_specs_;
    std::vector<std::size_t> fallback_index_;
};

struct FitOptions {
    double v_lo = 1e-6;
    double v_hi = 4.0;
    double xtol = 1e-10;
    int scan_points = 64;
    double scan_lo = 1e-5;
    double scan_hi = 1.0;
    std::optional<double> bracket_hint; // skip the scan, bracket around this value
    double hint_width = 4.0;            // multiplicative half-width of the hint bracket
    FrftConfig grid;
    double node_tol = 1e-9;
};

struct DayFit {
    double variance = 0.0;
    double objective = 0.0;
    std::size_t call_count = 0;
    bool bracket_warning = false; // scan found multiple local minima
};

// Least-squares variance fit on the day's call quotes. Scans a log-spaced
// grid to locate the global bracket, then refines with Brent to |dv| < xtol.
DayFit fit_day_variance(const DayChain& chain, const ModelParams& p, const FitOptions& opt);

// Same fit driven by an existing pricer (replication studies reuse the
// cached coefficients across refits).
DayFit fit_variance(const ChainPricer& pricer, const FitOptions& opt);

struct CalibrationResult {
    std::vector<Date> dates;
    std::vector<char> ok;
    std::vector<double> variances;
    std::vector<double> objectives;
    std::vector<std::size_t> call_counts;
    std::vector<std::vector<double>> residuals; // admitted call residuals per day
    std::vector<std::string> failures;          // "date: reason" for failed days
    double noise_variance = 0.0;
};

// Pooled noise-variance estimate: mean squared call residual over all
// fitted days (N = total admitted call count).
double estimate_noise_variance(const CalibrationResult& result);

// Fits every day of the panel; per-day failures are collected, not fatal.
CalibrationResult fit_panel(const std::vector<DayChain>& panel, const ModelParams& p,
                            const FitOptions& opt);

} // namespace heston

#endif // HESTON_CALIBRATION_HPP
