// SPDX-License-Identifier: Apache-2.0
//
// heston: command-line front end over the pricing, calibration and
// uncertainty layers. Subcommands: price, surface, fit, fisher, synth.
// Exit codes: 0 success, 2 configuration error, 3 empty data, 4 numerical
// failure. All CSV outputs are deterministic for a fixed configuration and
// seed and start with a `# config=<hash>` stamp.

#include "heston/heston.hpp"

#include <CLI11.hpp>
#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

using namespace heston;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitEmpty = 3;
constexpr int kExitNumerical = 4;

// Trade date reported by the dateless subcommands (price, surface).
constexpr Date kNominalDate{2026, 1, 5};

// Effective run configuration after precedence resolution: command-line
// flags beat the config file, which beats these reference defaults.
struct RunConfig {
    double kappa = 5.07;
    double theta = 0.0457;
    double sigma = 0.48;
    double rho = -0.767;
    double spot = 1845.73;
    double rate = 0.00167;
    double dividend = 0.01894;
    double variance = 0.0108;
    std::size_t n = 2048;
    double eta = 0.4;
    double lambda = 3.6549e-4;
    double alpha = 1.5;
    std::uint64_t seed = 1;
    std::string out;

    ModelParams params() const { return {kappa, theta, sigma, rho}; }
    MarketState state(const Date& d) const { return {d, spot, rate, dividend}; }
    FrftConfig grid() const { return {n, eta, lambda, alpha}; }

    std::string canonical() const {
        std::ostringstream s;
        s << "kappa=" << fmt_double(kappa) << ";theta=" << fmt_double(theta)
          << ";sigma=" << fmt_double(sigma) << ";rho=" << fmt_double(rho)
          << ";spot=" << fmt_double(spot) << ";rate=" << fmt_double(rate)
          << ";dividend=" << fmt_double(dividend) << ";variance=" << fmt_double(variance)
          << ";n=" << n << ";eta=" << fmt_double(eta) << ";lambda=" << fmt_double(lambda)
          << ";alpha=" << fmt_double(alpha) << ";seed=" << seed;
        return s.str();
    }
};

// Config fingerprint covering the shared run configuration plus the
// subcommand-specific options that shape the output.
std::uint64_t config_hash(const RunConfig& rc, const std::string& extra) {
    return fnv1a(extra.empty() ? rc.canonical() : rc.canonical() + ";" + extra);
}

std::string stamp_line(const RunConfig& rc, const std::string& extra) {
    return "# config=" + hex64(config_hash(rc, extra));
}

// Output sink: a file when --out is given, stdout otherwise.
class OutStream {
  public:
    explicit OutStream(const std::string& path) {
        if (path.empty()) {
            os_ = &std::cout;
            return;
        }
        file_.open(path, std::ios::binary);
        if (!file_) throw ConfigError("cannot open output file: " + path);
        os_ = &file_;
    }

    std::ostream& get() { return *os_; }

  private:
    std::ofstream file_;
    std::ostream* os_ = nullptr;
};

// Value at an off-node log strike by 4-point Lagrange interpolation on the
// uniform grid; exact on the nodes, O(lambda^4) between them.
double grid_value_at(const GridValues& gv, double log_strike) {
    const StrikeGrid& g = gv.grid;
    const std::size_t n = g.size();
    if (n < 4) throw ConfigError("grid too small for interpolation; need n >= 4");
    if (log_strike < g.log_strikes.front() || log_strike > g.log_strikes.back())
        throw ConfigError("strike lies outside the transform grid; widen the grid or use "
                          "--method direct");
    std::size_t i0 = g.nearest_index(log_strike);
    i0 = i0 >= 1 ? i0 - 1 : 0;
    i0 = std::min(i0, n - 4);
    const double t = (log_strike - g.log_strikes[i0]) / g.lambda;
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) {
        double w = 1.0;
        for (int l = 0; l < 4; ++l)
            if (l != j) w *= (t - l) / static_cast<double>(j - l);
        acc += w * gv.values[i0 + static_cast<std::size_t>(j)];
    }
    return acc;
}

Greek greek_by_name(const std::string& name) {
    for (int i = 0; i < static_cast<int>(kGreekCount); ++i)
        if (name == greek_label(static_cast<Greek>(i))) return static_cast<Greek>(i);
    throw ConfigError("unknown greek: " + name);
}

double ladder_point(double lo, double hi, std::size_t count, std::size_t i) {
    if (count <= 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

// ---------------------------------------------------------------- price --

struct PriceArgs {
    double strike = 0.0; // 0 means "use the spot"
    double maturity_days = 30.0;
    std::string method = "frft";
    bool grid_mode = false;
    bool check = false;
    bool put = false;
};

int cmd_price(const RunConfig& rc, const PriceArgs& a) {
    const ModelParams p = rc.params();
    const MarketState m = rc.state(kNominalDate);
    const FrftConfig cfg = rc.grid();
    const double tau = a.maturity_days / 365.0;
    const int eps = a.put ? -1 : +1;

    std::ostringstream extra;
    extra << "cmd=price;strike=" << fmt_double(a.strike) << ";maturity=" << fmt_double(a.maturity_days)
          << ";method=" << a.method << ";grid=" << a.grid_mode << ";put=" << a.put;

    OutStream out(rc.out);
    if (a.grid_mode) {
        const GridValues gv = price_grid(eps, tau, cfg, p, m, rc.variance);
        out.get() << stamp_line(rc, extra.str()) << '\n' << "k,strike,price\n";
        for (std::size_t i = 0; i < gv.grid.size(); ++i)
            out.get() << fmt_double(gv.grid.log_strikes[i]) << ',' << fmt_double(gv.grid.strikes[i])
                      << ',' << fmt_double(gv.values[i]) << '\n';
        return kExitOk;
    }

    const OptionSpec opt(eps, a.strike > 0.0 ? a.strike : rc.spot, tau);
    const auto frft_price = [&] {
        return grid_value_at(price_grid(eps, tau, cfg, p, m, rc.variance), opt.log_strike);
    };
    const auto direct_price = [&] { return price_direct(opt, p, m, rc.variance); };

    const double price = a.method == "direct" ? direct_price() : frft_price();
    if (a.check) {
        const double d = direct_price();
        const double f = frft_price();
        std::cerr << "check: direct=" << fmt_double(d) << " frft=" << fmt_double(f)
                  << " |diff|=" << fmt_double(std::abs(d - f)) << '\n';
    }
    out.get() << fmt_double(price) << '\n';
    return kExitOk;
}

// -------------------------------------------------------------- surface --

struct SurfaceArgs {
    std::string greek = "sigma0";
    bool vega_drop = false;
    double strike_lo = 0.0; // 0 means "use 0.7 * spot"
    double strike_hi = 0.0; // 0 means "use 1.3 * spot"
    std::size_t strike_count = 61;
    std::vector<double> maturity_days = {23.0, 30.0, 37.0};
    double variance_lo = 1e-4;
    double variance_hi = 0.025;
    std::size_t variance_count = 25;
};

int cmd_surface(const RunConfig& rc, const SurfaceArgs& a) {
    const ModelParams p = rc.params();
    const MarketState m = rc.state(kNominalDate);
    const FrftConfig cfg = rc.grid();
    if (a.maturity_days.empty()) throw ConfigError("maturity ladder must not be empty");

    std::ostringstream extra;
    extra << "cmd=surface;greek=" << a.greek << ";vega_drop=" << a.vega_drop;
    for (double d : a.maturity_days) extra << ";mat=" << fmt_double(d);

    OutStream out(rc.out);
    if (a.vega_drop) {
        if (a.variance_count == 0) throw ConfigError("variance ladder must not be empty");
        extra << ";vlo=" << fmt_double(a.variance_lo) << ";vhi=" << fmt_double(a.variance_hi)
              << ";vcount=" << a.variance_count;
        out.get() << stamp_line(rc, extra.str()) << '\n' << "variance,maturity_days,vega\n";
        for (double mat : a.maturity_days) {
            for (std::size_t i = 0; i < a.variance_count; ++i) {
                const double v = ladder_point(a.variance_lo, a.variance_hi, a.variance_count, i);
                const GridValues gv = greek_grid(Greek::Sigma0, +1, mat / 365.0, cfg, p, m, v);
                out.get() << fmt_double(v) << ',' << fmt_double(mat) << ','
                          << fmt_double(gv.values[gv.grid.spot_index()]) << '\n';
            }
        }
        return kExitOk;
    }

    if (a.strike_count == 0) throw ConfigError("strike ladder must not be empty");
    const Greek g = greek_by_name(a.greek);
    const double lo = a.strike_lo > 0.0 ? a.strike_lo : 0.7 * rc.spot;
    const double hi = a.strike_hi > 0.0 ? a.strike_hi : 1.3 * rc.spot;
    if (!(lo > 0.0 && hi >= lo)) throw ConfigError("strike ladder bounds must satisfy 0 < lo <= hi");
    extra << ";lo=" << fmt_double(lo) << ";hi=" << fmt_double(hi) << ";count=" << a.strike_count;

    out.get() << stamp_line(rc, extra.str()) << '\n' << "strike,maturity_days,value\n";
    for (double mat : a.maturity_days) {
        const GridValues gv = greek_grid(g, +1, mat / 365.0, cfg, p, m, rc.variance);
        for (std::size_t i = 0; i < a.strike_count; ++i) {
            const double strike = ladder_point(lo, hi, a.strike_count, i);
            out.get() << fmt_double(strike) << ',' << fmt_double(mat) << ','
                      << fmt_double(grid_value_at(gv, std::log(strike))) << '\n';
        }
    }
    return kExitOk;
}

// ------------------------------------------------------------ fit/fisher --

struct PanelArgs {
    std::string chains;
    std::string rates;
    std::string closes;
};

// Parse the three-file panel and apply the maturity-window filter per day;
// rejected rows are reported on stderr, empty days dropped.
std::vector<DayChain> load_filtered_panel(const PanelArgs& pa, const char* tag) {
    const ParsedPanel panel = parse_panel(pa.chains, pa.rates, pa.closes);
    for (const ParseReject& r : panel.rejects)
        std::cerr << tag << ": rejected " << r.file << ':' << r.line << ": " << r.reason << '\n';
    std::vector<DayChain> days;
    for (const DayChain& d : panel.days) {
        DayChain f = vix_component_filter(d);
        if (!f.quotes.empty()) days.push_back(std::move(f));
    }
    return days;
}

int cmd_fit(const RunConfig& rc, const PanelArgs& pa) {
    const std::vector<DayChain> days = load_filtered_panel(pa, "fit");
    if (days.empty()) {
        std::cerr << "fit: no quotes survive parsing and the maturity filter\n";
        return kExitEmpty;
    }
    FitOptions opt;
    opt.grid = rc.grid();
    const CalibrationResult res = fit_panel(days, rc.params(), opt);
    for (const std::string& f : res.failures) std::cerr << "fit: failed " << f << '\n';
    const std::size_t ok = static_cast<std::size_t>(
        std::count(res.ok.begin(), res.ok.end(), static_cast<char>(1)));
    if (ok == 0) {
        std::cerr << "fit: no day could be fitted\n";
        return kExitEmpty;
    }

    OutStream out(rc.out);
    out.get() << stamp_line(rc, "cmd=fit") << '\n'
              << "# noise_variance=" << fmt_double(res.noise_variance) << '\n'
              << "date,variance,sigma,objective,n_quotes\n";
    for (std::size_t i = 0; i < res.dates.size(); ++i) {
        if (!res.ok[i]) continue;
        out.get() << res.dates[i].iso() << ',' << fmt_double(res.variances[i]) << ','
                  << fmt_double(std::sqrt(res.variances[i])) << ',' << fmt_double(res.objectives[i])
                  << ',' << res.call_counts[i] << '\n';
    }
    return kExitOk;
}

// Fitted series written by cmd_fit: per-date variances plus the pooled
// noise-variance stamp.
struct FitSeries {
    std::map<std::string, double> variance_by_date;
    double noise_variance = 0.0;
};

FitSeries read_fit_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open fit file: " + path);
    FitSeries fs;
    bool have_noise = false;
    bool header_seen = false;
    std::string line;
    long number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            const std::string key = "# noise_variance=";
            if (line.rfind(key, 0) == 0) {
                double v = 0.0;
                if (!parse_double(line.substr(key.size()), v))
                    throw ParseError("bad noise_variance stamp", path, number);
                fs.noise_variance = v;
                have_noise = true;
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const std::vector<std::string> f = split_csv(line);
        if (f.size() < 2) throw ParseError("expected date,variance,...", path, number);
        Date::parse_iso(f[0]);
        double v = 0.0;
        if (!parse_double(f[1], v) || !(v > 0.0))
            throw ParseError("bad variance field", path, number);
        fs.variance_by_date[f[0]] = v;
    }
    if (!header_seen) throw ParseError("missing header", path, number);
    if (!have_noise) throw ParseError("missing noise_variance stamp", path, number);
    return fs;
}

struct FisherArgs {
    std::string fit_file;
    std::string mode = "summed";
    bool swap_coords = false;
    bool dense_check = false;
    double horizon_days = 30.0;
};

// Dense-inversion cross-check of the Schur-path diagonal (stderr only).
void dense_check_report(const BlockFisher& bf, const DiagInverse& di) {
    if (!di.shared_reliable) {
        std::cerr << "dense-check: shared block singular or ill-conditioned (condition "
                  << fmt_double(di.schur_condition) << "); dense inverse skipped\n";
        return;
    }
    for (Eigen::Index i = 0; i < bf.days(); ++i) {
        if (!(bf.a11(i) > 0.0)) {
            std::cerr << "dense-check: zero-information day present; dense inverse skipped\n";
            return;
        }
    }
    const Eigen::MatrixXd inv = bf.dense().inverse();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < bf.days(); ++i) {
        const double ref = inv(i, i);
        worst = std::max(worst, std::abs(di.day[static_cast<std::size_t>(i)] - ref) / std::abs(ref));
    }
    for (int c = 0; c < 4; ++c) {
        const double ref = inv(bf.days() + c, bf.days() + c);
        worst = std::max(worst, std::abs(di.shared[static_cast<std::size_t>(c)] - ref) / std::abs(ref));
    }
    std::cerr << "dense-check: max relative deviation = " << fmt_double(worst) << '\n';
}

int cmd_fisher(const RunConfig& rc, const PanelArgs& pa, const FisherArgs& fa) {
    std::vector<DayChain> days = load_filtered_panel(pa, "fisher");
    if (days.empty()) {
        std::cerr << "fisher: no quotes survive parsing and the maturity filter\n";
        return kExitEmpty;
    }

    // Per-day fitted variances plus the pooled noise level, read from a
    // previous `fit` output or refit in place.
    std::vector<DayChain> used;
    std::vector<double> variances;
    double vhat = 0.0;
    if (!fa.fit_file.empty()) {
        const FitSeries fs = read_fit_csv(fa.fit_file);
        vhat = fs.noise_variance;
        for (DayChain& d : days) {
            const auto it = fs.variance_by_date.find(d.state.date.iso());
            if (it == fs.variance_by_date.end()) {
                std::cerr << "fisher: no fitted variance for " << d.state.date.iso()
                          << "; day skipped\n";
                continue;
            }
            used.push_back(std::move(d));
            variances.push_back(it->second);
        }
    } else {
        FitOptions opt;
        opt.grid = rc.grid();
        const CalibrationResult res = fit_panel(days, rc.params(), opt);
        for (const std::string& f : res.failures) std::cerr << "fisher: failed " << f << '\n';
        vhat = res.noise_variance;
        for (std::size_t i = 0; i < days.size(); ++i) {
            if (!res.ok[i]) continue;
            used.push_back(std::move(days[i]));
            variances.push_back(res.variances[i]);
        }
    }
    if (used.empty()) {
        std::cerr << "fisher: no usable days\n";
        return kExitEmpty;
    }
    if (!(vhat > 0.0)) {
        std::cerr << "fisher: pooled noise variance is zero; bands are undefined\n";
        return kExitNumerical;
    }

    const ModelParams p = rc.params();
    std::vector<double> sigmas(variances.size());
    for (std::size_t i = 0; i < variances.size(); ++i) sigmas[i] = std::sqrt(variances[i]);

    // Gradients are computed once; both accumulation modes share them.
    std::vector<DayGradients> grads;
    grads.reserve(used.size());
    for (std::size_t i = 0; i < used.size(); ++i)
        grads.push_back(chain_gradients(used[i], p, variances[i], rc.grid()));

    const BlockFisher summed = assemble_block_fisher(grads, vhat, FisherMode::SummedChain);
    const BlockFisher per_option = assemble_block_fisher(grads, vhat, FisherMode::PerOption);
    const BlockFisher& bf = fa.mode == "per-option" ? per_option : summed;

    // Both modes are reported so their discrepancy stays visible.
    const auto median_rel = [&sigmas](const BlockFisher& b) {
        const CredibilityBand cb = credibility_bands(invert_block_diagonal_entries(b), sigmas);
        std::vector<double> r;
        for (double x : cb.relative)
            if (std::isfinite(x)) r.push_back(x);
        if (r.empty()) return std::numeric_limits<double>::infinity();
        const std::size_t mid = r.size() / 2;
        std::nth_element(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(mid), r.end());
        return r[mid];
    };
    std::cerr << "fisher: median relative band summed=" << fmt_double(median_rel(summed))
              << " per-option=" << fmt_double(median_rel(per_option)) << '\n';

    std::ostringstream extra;
    extra << "cmd=fisher;mode=" << fa.mode << ";swap=" << fa.swap_coords
          << ";horizon=" << fmt_double(fa.horizon_days);
    const std::array<std::string, 4> shared_names = {"kappa", "sqrt_theta", "sigma", "rho"};

    OutStream out(rc.out);
    if (!fa.swap_coords) {
        const DiagInverse di = invert_block_diagonal_entries(bf);
        const CredibilityBand cb = credibility_bands(di, sigmas);
        out.get() << stamp_line(rc, extra.str()) << '\n'
                  << "# noise_variance=" << fmt_double(vhat) << '\n';
        for (int c = 0; c < 4; ++c)
            out.get() << "# se_" << shared_names[static_cast<std::size_t>(c)] << '='
                      << fmt_double(cb.shared_se[static_cast<std::size_t>(c)]) << '\n';
        out.get() << "date,sigma,beta,relative\n";
        for (std::size_t i = 0; i < used.size(); ++i)
            out.get() << used[i].state.date.iso() << ',' << fmt_double(sigmas[i]) << ','
                      << fmt_double(cb.beta[i]) << ',' << fmt_double(cb.relative[i]) << '\n';
        if (fa.dense_check) dense_check_report(bf, di);
        return kExitOk;
    }

    const double horizon = fa.horizon_days / 365.0;
    const KvarJacobian jac = kvar_jacobian(sigmas, p, horizon);
    const SwapParams sp(horizon, p);
    const VarSwapSeries vs = transform_fisher(bf, jac, sigmas, sp);
    out.get() << stamp_line(rc, extra.str()) << '\n'
              << "# noise_variance=" << fmt_double(vhat) << '\n';
    for (int c = 0; c < 4; ++c)
        out.get() << "# se_" << shared_names[static_cast<std::size_t>(c)] << '='
                  << fmt_double(vs.shared_se[static_cast<std::size_t>(c)]) << '\n';
    out.get() << "date,kvar,beta,relative\n";
    for (std::size_t i = 0; i < used.size(); ++i)
        out.get() << used[i].state.date.iso() << ',' << fmt_double(vs.kvar[i]) << ','
                  << fmt_double(vs.beta[i]) << ',' << fmt_double(vs.relative[i]) << '\n';
    if (fa.dense_check) {
        const BlockFisher bt = transform_block(bf, jac);
        dense_check_report(bt, invert_block_diagonal_entries(bt));
    }
    return kExitOk;
}

// ---------------------------------------------------------------- synth --

struct SynthArgs {
    std::string dir = ".";
    int day_count = 20;
    int substeps = 10;
    double noise_sd = 0.0;
    double half_spread = 0.05;
    int ladder_half_width = 6;
    int ladder_step_nodes = 32;
    std::vector<int> expiry_days = {25, 32};
    std::vector<double> fixed_variances;
    std::string truth;
};

int cmd_synth(const RunConfig& rc, const SynthArgs& a) {
    if (a.expiry_days.size() != 2)
        throw ConfigError("--expiry-days takes exactly two values");
    SyntheticPanelSpec spec;
    spec.params = rc.params();
    spec.v0 = rc.variance;
    spec.day_count = a.day_count;
    spec.substeps_per_day = a.substeps;
    spec.spot0 = rc.spot;
    spec.rate = rc.rate;
    spec.dividend_yield = rc.dividend;
    spec.expiry_days = {a.expiry_days[0], a.expiry_days[1]};
    spec.ladder_half_width = a.ladder_half_width;
    spec.ladder_step_nodes = a.ladder_step_nodes;
    spec.pricing = rc.grid();
    spec.noise_sd = a.noise_sd;
    spec.half_spread = a.half_spread;
    spec.rng_seed = rc.seed;
    spec.fixed_variances = a.fixed_variances;

    const SyntheticPanel panel = simulate_heston_panel(spec);

    std::ostringstream extra;
    extra << "cmd=synth;days=" << a.day_count << ";substeps=" << a.substeps
          << ";noise_sd=" << fmt_double(a.noise_sd) << ";half_spread=" << fmt_double(a.half_spread)
          << ";hw=" << a.ladder_half_width << ";step=" << a.ladder_step_nodes
          << ";expiries=" << a.expiry_days[0] << ',' << a.expiry_days[1];
    for (double v : a.fixed_variances) extra << ";fv=" << fmt_double(v);
    const std::uint64_t hash = config_hash(rc, extra.str());

    namespace fs = std::filesystem;
    fs::create_directories(a.dir);
    const std::string chains = (fs::path(a.dir) / "chains.csv").string();
    const std::string rates = (fs::path(a.dir) / "rates.csv").string();
    const std::string closes = (fs::path(a.dir) / "closes.csv").string();
    write_panel(panel.days, chains, rates, closes, hash);

    const std::string truth =
        a.truth.empty() ? (fs::path(a.dir) / "truth.csv").string() : a.truth;
    std::ofstream tf(truth, std::ios::binary);
    if (!tf) throw ConfigError("cannot open output file: " + truth);
    tf << "# config=" << hex64(hash) << '\n' << "date,variance,sigma\n";
    for (std::size_t i = 0; i < panel.days.size(); ++i)
        tf << panel.days[i].state.date.iso() << ',' << fmt_double(panel.true_variances[i]) << ','
           << fmt_double(std::sqrt(panel.true_variances[i])) << '\n';
    std::cerr << "synth: wrote " << chains << ' ' << rates << ' ' << closes << ' ' << truth
              << '\n';
    return kExitOk;
}

template <typename F>
int run_guard(F&& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.file << ':' << e.line << ": " << e.what() << '\n';
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const GridError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DayError& e) {
        std::cerr << "error: " << e.date << ": " << e.what() << '\n';
        return kExitEmpty;
    } catch (const IntegrationError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const DomainError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heston option pricing, calibration and uncertainty toolkit"};
    app.require_subcommand(1);

    RunConfig rc;
    PriceArgs price_args;
    SurfaceArgs surface_args;
    PanelArgs panel_args;
    FisherArgs fisher_args;
    SynthArgs synth_args;

    // Shared options live on the top-level app: config files are processed
    // there, and subcommands reach them through fallthrough, so
    // `heston price --kappa 2.5` and `heston --kappa 2.5 price` both work.
    app.set_config("--params-file", "", "Read key=value defaults from this file");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.add_option("--kappa", rc.kappa, "Mean-reversion speed")->capture_default_str();
    app.add_option("--theta", rc.theta, "Long-run variance")->capture_default_str();
    app.add_option("--sigma", rc.sigma, "Volatility of variance")->capture_default_str();
    app.add_option("--rho", rc.rho, "Spot/variance correlation")->capture_default_str();
    app.add_option("--spot", rc.spot, "Spot price")->capture_default_str();
    app.add_option("--rate", rc.rate, "Risk-free rate")->capture_default_str();
    app.add_option("--dividend", rc.dividend, "Dividend yield")->capture_default_str();
    app.add_option("--variance", rc.variance, "Instantaneous variance")->capture_default_str();
    app.add_option("--n", rc.n, "Transform size")->capture_default_str();
    app.add_option("--eta", rc.eta, "Frequency spacing")->capture_default_str();
    app.add_option("--lambda", rc.lambda, "Log-strike spacing")->capture_default_str();
    app.add_option("--alpha", rc.alpha, "Damping exponent")->capture_default_str();
    app.add_option("--seed", rc.seed, "RNG seed")->capture_default_str();
    app.add_option("--out", rc.out, "Output path (default: stdout)");
    const auto add_common = [](CLI::App* sub) { sub->fallthrough(); };
    const auto add_panel = [&panel_args](CLI::App* sub) {
        sub->add_option("--chains", panel_args.chains, "Option chain CSV")->required();
        sub->add_option("--rates", panel_args.rates, "Rate curve CSV")->required();
        sub->add_option("--closes", panel_args.closes, "Close/dividend CSV")->required();
    };

    CLI::App* price = app.add_subcommand("price", "Price one option or the full strike grid");
    add_common(price);
    price->add_option("--strike", price_args.strike, "Strike (default: the spot)");
    price->add_option("--maturity", price_args.maturity_days, "Maturity in calendar days")
        ->capture_default_str();
    price->add_option("--method", price_args.method, "Pricing path")
        ->check(CLI::IsMember({"direct", "frft"}))
        ->capture_default_str();
    price->add_flag("--grid", price_args.grid_mode, "Emit the full strike-grid CSV");
    price->add_flag("--check", price_args.check, "Cross-check both methods on stderr");
    price->add_flag("--put", price_args.put, "Price a put instead of a call");

    CLI::App* surface =
        app.add_subcommand("surface", "Sensitivity surface over strike and maturity ladders");
    add_common(surface);
    surface->add_option("--greek", surface_args.greek, "Sensitivity to tabulate")
        ->check(CLI::IsMember({"sigma0", "kappa", "sqrt_theta", "sigma", "rho"}))
        ->capture_default_str();
    surface->add_flag("--vega-drop", surface_args.vega_drop,
                      "Tabulate ATM vega against instantaneous variance");
    surface->add_option("--strike-lo", surface_args.strike_lo, "Ladder low strike (default: 0.7*spot)");
    surface->add_option("--strike-hi", surface_args.strike_hi, "Ladder high strike (default: 1.3*spot)");
    surface->add_option("--strike-count", surface_args.strike_count, "Ladder size")
        ->capture_default_str();
    surface->add_option("--maturities", surface_args.maturity_days, "Maturity ladder in calendar days")
        ->delimiter(',')
        ->capture_default_str();
    surface->add_option("--variance-lo", surface_args.variance_lo, "Vega-drop low variance")
        ->capture_default_str();
    surface->add_option("--variance-hi", surface_args.variance_hi, "Vega-drop high variance")
        ->capture_default_str();
    surface->add_option("--variance-count", surface_args.variance_count, "Vega-drop ladder size")
        ->capture_default_str();

    CLI::App* fit = app.add_subcommand("fit", "Fit per-day variances to an option panel");
    add_common(fit);
    add_panel(fit);

    CLI::App* fisher =
        app.add_subcommand("fisher", "Uncertainty bands from the panel information matrix");
    add_common(fisher);
    add_panel(fisher);
    fisher->add_option("--fit", fisher_args.fit_file,
                       "Fitted-variance CSV from `fit` (default: refit in place)");
    fisher->add_option("--mode", fisher_args.mode, "Information accumulation")
        ->check(CLI::IsMember({"summed", "per-option"}))
        ->capture_default_str();
    fisher->add_flag("--swap", fisher_args.swap_coords,
                     "Report variance-swap strikes instead of volatilities");
    fisher->add_flag("--dense-check", fisher_args.dense_check,
                     "Cross-check the Schur inverse densely on stderr");
    fisher->add_option("--horizon", fisher_args.horizon_days, "Swap horizon in calendar days")
        ->capture_default_str();

    CLI::App* synth = app.add_subcommand("synth", "Write a synthetic option panel with known truth");
    add_common(synth);
    synth->add_option("--dir", synth_args.dir, "Output directory")->capture_default_str();
    synth->add_option("--days", synth_args.day_count, "Panel length in trade days")
        ->capture_default_str();
    synth->add_option("--substeps", synth_args.substeps, "Euler substeps per day")
        ->capture_default_str();
    synth->add_option("--noise-sd", synth_args.noise_sd, "Gaussian noise sd on quoted mids")
        ->capture_default_str();
    synth->add_option("--half-spread", synth_args.half_spread, "Half bid/ask spread")
        ->capture_default_str();
    synth->add_option("--ladder-half-width", synth_args.ladder_half_width,
                      "Strikes on each side of the spot node")
        ->capture_default_str();
    synth->add_option("--ladder-step-nodes", synth_args.ladder_step_nodes,
                      "Grid nodes between adjacent ladder strikes")
        ->capture_default_str();
    synth->add_option("--expiry-days", synth_args.expiry_days, "Two ladder expiries in days")
        ->delimiter(',')
        ->expected(2)
        ->capture_default_str();
    synth->add_option("--fixed-variances", synth_args.fixed_variances,
                      "Per-day variances replacing the simulated path")
        ->delimiter(',');
    synth->add_option("--truth", synth_args.truth, "Truth CSV path (default: <dir>/truth.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    return run_guard([&]() -> int {
        if (price->parsed()) return cmd_price(rc, price_args);
        if (surface->parsed()) return cmd_surface(rc, surface_args);
        if (fit->parsed()) return cmd_fit(rc, panel_args);
        if (fisher->parsed()) return cmd_fisher(rc, panel_args, fisher_args);
        return cmd_synth(rc, synth_args);
    });
}
