// SPDX-License-Identifier: Apache-2.0

#include "heston/market_data.hpp"

#include "heston/csv.hpp"
#include "heston/errors.hpp"
#include "heston/parallel.hpp"
#include "heston/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace heston {

namespace {

constexpr const char* kChainsHeader = "trade_date,expiry_date,flag,strike,bid,ask";
constexpr const char* kRatesHeader = "date,maturity_days,rate";
constexpr const char* kClosesHeader = "date,close,dividend_yield";
constexpr long kRateAnchorDays = 30;

struct Line {
    long number;
    std::string text;
};

// Data lines of a CSV file: comments and blank lines skipped, CRLF
// tolerated, first data line must match the expected header.
std::vector<Line> read_csv_lines(const std::string& path, const char* header,
                                 std::size_t& data_lines) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file", path, 0);
    std::vector<Line> out;
    std::string s;
    long number = 0;
    bool header_seen = false;
    while (std::getline(in, s)) {
        ++number;
        if (!s.empty() && s.back() == '\r') s.pop_back();
        if (s.empty() || s[0] == '#') continue;
        if (!header_seen) {
            if (s != header)
                throw ParseError("header mismatch, expected \"" + std::string(header) + "\"",
                                 path, number);
            header_seen = true;
            continue;
        }
        out.push_back({number, s});
    }
    if (!header_seen) throw ParseError("missing header", path, number);
    data_lines += out.size();
    return out;
}

bool parse_date(const std::string& s, Date& out) {
    try {
        out = Date::parse_iso(s);
        return true;
    } catch (const ConfigError&) {
        return false;
    }
}

double interp_rate(const std::vector<std::pair<long, double>>& curve, long days) {
    if (days <= curve.front().first) return curve.front().second;
    if (days >= curve.back().first) return curve.back().second;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (days <= curve[i].first) {
            const double w = static_cast<double>(days - curve[i - 1].first) /
                             static_cast<double>(curve[i].first - curve[i - 1].first);
            return curve[i - 1].second + w * (curve[i].second - curve[i - 1].second);
        }
    }
    return curve.back().second;
}

long days_to_expiry(const OptionSpec& spec) {
    return std::lround(spec.maturity * 365.0);
}

} // namespace

ParsedPanel parse_panel(const std::string& chains_path, const std::string& rates_path,
                        const std::string& closes_path) {
    ParsedPanel out;

    std::map<long, std::pair<double, double>> closes; // serial -> (close, q)
    for (const Line& ln : read_csv_lines(closes_path, kClosesHeader, out.data_lines)) {
        const std::vector<std::string> f = split_csv(ln.text);
        Date d;
        double close = 0.0, q = 0.0;
        if (f.size() != 3) {
            out.rejects.push_back({closes_path, ln.number, "expected 3 fields"});
        } else if (!parse_date(f[0], d)) {
            out.rejects.push_back({closes_path, ln.number, "bad date"});
        } else if (!parse_double(f[1], close) || !(close > 0.0)) {
            out.rejects.push_back({closes_path, ln.number, "bad close"});
        } else if (!parse_double(f[2], q)) {
            out.rejects.push_back({closes_path, ln.number, "bad dividend yield"});
        } else if (!closes.emplace(d.serial(), std::make_pair(close, q)).second) {
            out.rejects.push_back({closes_path, ln.number, "duplicate date"});
        } else {
            ++out.accepted;
        }
    }

    std::map<long, std::vector<std::pair<long, double>>> curves;
    for (const Line& ln : read_csv_lines(rates_path, kRatesHeader, out.data_lines)) {
        const std::vector<std::string> f = split_csv(ln.text);
        Date d;
        long days = 0;
        double r = 0.0;
        if (f.size() != 3) {
            out.rejects.push_back({rates_path, ln.number, "expected 3 fields"});
        } else if (!parse_date(f[0], d)) {
            out.rejects.push_back({rates_path, ln.number, "bad date"});
        } else if (!parse_long(f[1], days) || days <= 0) {
            out.rejects.push_back({rates_path, ln.number, "bad maturity_days"});
        } else if (!parse_double(f[2], r)) {
            out.rejects.push_back({rates_path, ln.number, "bad rate"});
        } else {
            auto& curve = curves[d.serial()];
            const auto dup = std::find_if(curve.begin(), curve.end(),
                                          [&](const auto& kv) { return kv.first == days; });
            if (dup != curve.end()) {
                out.rejects.push_back({rates_path, ln.number, "duplicate maturity for date"});
            } else {
                curve.emplace_back(days, r);
                ++out.accepted;
            }
        }
    }
    for (auto& [serial, curve] : curves) std::sort(curve.begin(), curve.end());

    struct Row {
        Date trade, expiry;
        int epsilon;
        double strike, bid, ask;
    };
    std::map<long, std::vector<Row>> by_day;
    std::set<std::tuple<long, long, double, int>> seen;
    for (const Line& ln : read_csv_lines(chains_path, kChainsHeader, out.data_lines)) {
        const std::vector<std::string> f = split_csv(ln.text);
        Row r{};
        if (f.size() != 6) {
            out.rejects.push_back({chains_path, ln.number, "expected 6 fields"});
            continue;
        }
        if (!parse_date(f[0], r.trade) || !parse_date(f[1], r.expiry)) {
            out.rejects.push_back({chains_path, ln.number, "bad date"});
            continue;
        }
        if (!(r.trade < r.expiry)) {
            out.rejects.push_back({chains_path, ln.number, "expiry not after trade date"});
            continue;
        }
        if (f[2] == "C") {
            r.epsilon = +1;
        } else if (f[2] == "P") {
            r.epsilon = -1;
        } else {
            out.rejects.push_back({chains_path, ln.number, "flag must be C or P"});
            continue;
        }
        if (!parse_double(f[3], r.strike) || !(r.strike > 0.0)) {
            out.rejects.push_back({chains_path, ln.number, "bad strike"});
            continue;
        }
        if (!parse_double(f[4], r.bid) || r.bid < 0.0) {
            out.rejects.push_back({chains_path, ln.number, "bad bid"});
            continue;
        }
        if (!parse_double(f[5], r.ask) || r.ask < r.bid) {
            out.rejects.push_back({chains_path, ln.number, "bad ask"});
            continue;
        }
        if (!seen.emplace(r.trade.serial(), r.expiry.serial(), r.strike, r.epsilon).second) {
            out.rejects.push_back({chains_path, ln.number, "duplicate record"});
            continue;
        }
        if (!closes.count(r.trade.serial())) {
            out.rejects.push_back({chains_path, ln.number, "no close for trade date"});
            continue;
        }
        if (!curves.count(r.trade.serial())) {
            out.rejects.push_back({chains_path, ln.number, "no rate curve for trade date"});
            continue;
        }
        by_day[r.trade.serial()].push_back(r);
        ++out.accepted;
    }

    for (const auto& [serial, rows] : by_day) {
        const Date date = Date::from_serial(serial);
        const auto [close, q] = closes.at(serial);
        const double rate = interp_rate(curves.at(serial), kRateAnchorDays);
        DayChain day{MarketState(date, close, rate, q), {}};
        for (const Row& r : rows) {
            const int days = days_between(r.trade, r.expiry);
            const OptionSpec spec(r.epsilon, r.strike, year_fraction(days));
            day.quotes.emplace_back(spec, r.bid, r.ask);
        }
        out.days.push_back(std::move(day));
    }
    return out;
}

void write_panel(const std::vector<DayChain>& days, const std::string& chains_path,
                 const std::string& rates_path, const std::string& closes_path,
                 std::uint64_t config_hash) {
    const std::string stamp = "# config=" + hex64(config_hash) + "\n";

    std::ofstream chains(chains_path);
    std::ofstream rates(rates_path);
    std::ofstream closes(closes_path);
    if (!chains || !rates || !closes) throw ParseError("cannot open output file", chains_path, 0);

    chains << stamp << kChainsHeader << "\n";
    rates << stamp << kRatesHeader << "\n";
    closes << stamp << kClosesHeader << "\n";

    for (const DayChain& day : days) {
        const std::string d = day.state.date.iso();
        closes << d << "," << fmt_double(day.state.spot) << ","
               << fmt_double(day.state.dividend_yield) << "\n";
        rates << d << "," << kRateAnchorDays << "," << fmt_double(day.state.rate) << "\n";

        std::vector<const OptionQuote*> sorted;
        for (const OptionQuote& q : day.quotes) sorted.push_back(&q);
        std::sort(sorted.begin(), sorted.end(), [](const OptionQuote* a, const OptionQuote* b) {
            if (a->spec.maturity != b->spec.maturity) return a->spec.maturity < b->spec.maturity;
            if (a->spec.strike != b->spec.strike) return a->spec.strike < b->spec.strike;
            return a->spec.epsilon > b->spec.epsilon; // calls before puts
        });
        for (const OptionQuote* q : sorted) {
            const Date expiry = day.state.date.plus_days(static_cast<int>(days_to_expiry(q->spec)));
            chains << d << "," << expiry.iso() << "," << (q->spec.is_call() ? "C" : "P") << ","
                   << fmt_double(q->spec.strike) << "," << fmt_double(q->bid) << ","
                   << fmt_double(q->ask) << "\n";
        }
    }
}

DayChain vix_component_filter(const DayChain& chain) {
    DayChain out{chain.state, {}};
    std::vector<const OptionQuote*> window;
    std::set<long> expiries;
    for (const OptionQuote& q : chain.quotes) {
        const long d = days_to_expiry(q.spec);
        if (d <= 23 || d >= 37) continue;
        if (!(q.bid > 0.0)) continue;
        window.push_back(&q);
        expiries.insert(d);
    }
    // Near- and next-term: the two smallest surviving maturities.
    std::set<long> keep;
    for (long d : expiries) {
        keep.insert(d);
        if (keep.size() == 2) break;
    }
    for (const OptionQuote* q : window)
        if (keep.count(days_to_expiry(q->spec))) out.quotes.push_back(*q);
    return out;
}

SyntheticPanel simulate_heston_panel(const SyntheticPanelSpec& spec) {
    if (spec.day_count < 1) throw ConfigError("day_count must be >= 1");
    if (spec.substeps_per_day < 1) throw ConfigError("substeps_per_day must be >= 1");
    if (!(spec.noise_sd >= 0.0)) throw ConfigError("noise_sd must be >= 0");
    if (!spec.fixed_variances.empty() &&
        spec.fixed_variances.size() != static_cast<std::size_t>(spec.day_count))
        throw ConfigError("fixed_variances length must equal day_count");
    const std::size_t hw = static_cast<std::size_t>(spec.ladder_half_width);
    const std::size_t step = static_cast<std::size_t>(spec.ladder_step_nodes);
    if (spec.ladder_half_width < 0 || spec.ladder_step_nodes < 1 ||
        hw * step >= spec.pricing.n / 2)
        throw ConfigError("strike ladder does not fit on the pricing grid");

    SyntheticPanel out;
    out.true_variances.resize(spec.day_count);
    std::vector<double> spots(spec.day_count);

    if (!spec.fixed_variances.empty()) {
        out.true_variances = spec.fixed_variances;
        std::fill(spots.begin(), spots.end(), spec.spot0);
    } else {
        NormalRng rng(splitmix64(spec.rng_seed ^ 0x706174685f726e67ULL));
        const double dt = 1.0 / (365.0 * spec.substeps_per_day);
        const double rho = spec.params.rho;
        const double rc = std::sqrt(1.0 - rho * rho);
        double x = std::log(spec.spot0);
        double v = spec.v0;
        for (int t = 0; t < spec.day_count; ++t) {
            out.true_variances[t] = std::max(v, 0.0);
            spots[t] = std::exp(x);
            for (int s = 0; s < spec.substeps_per_day; ++s) {
                const double vp = std::max(v, 0.0);
                const double z2 = rng.normal();
                const double z1 = rho * z2 + rc * rng.normal();
                x += (spec.rate - spec.dividend_yield - 0.5 * vp) * dt +
                     std::sqrt(vp * dt) * z1;
                v += spec.params.kappa * (spec.params.theta - vp) * dt +
                     spec.params.sigma * std::sqrt(vp * dt) * z2;
            }
        }
    }

    out.days.reserve(spec.day_count);
    for (int t = 0; t < spec.day_count; ++t) {
        const Date date = spec.start_date.plus_days(t);
        const MarketState state(date, spots[t], spec.rate, spec.dividend_yield);
        DayChain day{state, {}};
        NormalRng noise(splitmix64(spec.rng_seed ^ (0x71756f7465ULL + 7919ULL * t)));

        for (int e = 0; e < 2; ++e) {
            const int dte = spec.expiry_days[e];
            const double tau = year_fraction(dte);
            const GridValues calls =
                price_grid(+1, tau, spec.pricing, spec.params, state, out.true_variances[t]);
            const GridValues puts =
                price_grid(-1, tau, spec.pricing, spec.params, state, out.true_variances[t]);
            const std::size_t mid_node = calls.grid.spot_index();

            for (int j = -spec.ladder_half_width; j <= spec.ladder_half_width; ++j) {
                const std::size_t u = static_cast<std::size_t>(
                    static_cast<long long>(mid_node) + static_cast<long long>(j) * spec.ladder_step_nodes);
                const double strike = calls.grid.strikes[u];
                for (int epsilon : {+1, -1}) {
                    const double model = (epsilon > 0) ? calls.values[u] : puts.values[u];
                    const double obs =
                        (spec.noise_sd > 0.0) ? model + spec.noise_sd * noise.normal() : model;
                    double bid = obs - spec.half_spread;
                    double ask = obs + spec.half_spread;
                    if (!(bid > 0.0)) { // no market: park an untradable quote
                        bid = 0.0;
                        ask = std::max(ask, 0.0);
                    }
                    day.quotes.emplace_back(OptionSpec(epsilon, strike, tau), bid, ask, obs);
                }
            }
        }
        out.days.push_back(std::move(day));
    }
    return out;
}

std::vector<double> sample_terminal_variance(const ModelParams& p, double v0, double t,
                                             int substeps, std::size_t n_paths,
                                             std::uint64_t seed) {
    if (substeps < 1) throw ConfigError("substeps must be >= 1");
    if (!(v0 >= 0.0) || !(t > 0.0)) throw ConfigError("need v0 >= 0 and t > 0");
    std::vector<double> out(n_paths);
    const double dt = t / substeps;
    parallel_for(n_paths, [&](std::size_t path) {
        NormalRng rng(splitmix64(seed ^ (0x636972ULL + 0x9e3779b9ULL * (path + 1))));
        double v = v0;
        for (int s = 0; s < substeps; ++s) {
            const double vp = std::max(v, 0.0);
            v += p.kappa * (p.theta - vp) * dt + p.sigma * std::sqrt(vp * dt) * rng.normal();
        }
        out[path] = v;
    });
    return out;
}

} // namespace heston
