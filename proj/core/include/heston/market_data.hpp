// SPDX-License-Identifier: Apache-2.0

#ifndef HESTON_MARKET_DATA_HPP
#define HESTON_MARKET_DATA_HPP

#include "heston/calibration.hpp"
#include "heston/dates.hpp"
#include "heston/frft.hpp"
#include "heston/types.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace heston {

struct ParseReject {
    std::string file;
    long line;
    std::string reason;
};

// Parsed panel plus full accounting: accepted + rejected equals the number
// of data lines seen, so no record is ever dropped silently.
struct ParsedPanel {
    std::vector<DayChain> days;
    std::size_t accepted = 0;
    std::size_t data_lines = 0;
    std::vector<ParseReject> rejects;
};

// Reads the three-file panel (chains, per-day rate curves, closes).
// Rows that violate the schema are rejected individually with a line
// diagnostic; structurally broken files (missing, bad header) throw.
// The day's discount rate is the curve linearly interpolated at the
// 30-day point, with flat extrapolation beyond the quoted maturities.
ParsedPanel parse_panel(const std::string& chains_path, const std::string& rates_path,
                        const std::string& closes_path);

// Writes a panel in the same three-file layout; the first line of every
// file is a `# config=<hash>` stamp. parse_panel(write_panel(p)) == p up
// to row ordering.
void write_panel(const std::vector<DayChain>& days, const std::string& chains_path,
                 const std::string& rates_path, const std::string& closes_path,
                 std::uint64_t config_hash);

// Component selection for the 30-day variance window: keeps quotes with
// strictly more than 23 and strictly fewer than 37 calendar days to
// expiry and a nonzero bid, then keeps the two nearest surviving
// maturities. Idempotent.
DayChain vix_component_filter(const DayChain& chain);

struct SyntheticPanelSpec {
    ModelParams params{5.07, 0.0457, 0.48, -0.767};
    double v0 = 0.0108;
    int day_count = 20;
    int substeps_per_day = 10;
    double spot0 = 1845.73;
    double rate = 0.00167;
    double dividend_yield = 0.01894;
    Date start_date{2026, 1, 5};
    std::array<int, 2> expiry_days{25, 32};
    int ladder_half_width = 6;  // strikes on each side of the spot node
    int ladder_step_nodes = 32; // grid nodes between adjacent ladder strikes
    FrftConfig pricing;         // grid the ladder strikes are anchored to
    double noise_sd = 0.0;
    double half_spread = 0.05;
    std::uint64_t rng_seed = 1;
    // When non-empty (length day_count), these variances replace the
    // simulated path and the spot is held at spot0: a designed panel for
    // estimator studies.
    std::vector<double> fixed_variances;
};

struct SyntheticPanel {
    std::vector<double> true_variances;
    std::vector<DayChain> days;
};

// Simulates a daily (spot, variance) path by full-truncation Euler with
// correlated shocks, prices a call+put ladder on transform-grid strikes
// for each day and expiry, and perturbs the mids with Gaussian noise.
// Deterministic for a fixed seed.
SyntheticPanel simulate_heston_panel(const SyntheticPanelSpec& spec);

// Terminal-variance samples of the full-truncation Euler scheme; used to
// bound the scheme's bias against the closed-form conditional mean.
std::vector<double> sample_terminal_variance(const ModelParams& p, double v0, double t,
                                             int substeps, std::size_t n_paths,
                                             std::uint64_t seed);

} // namespace heston

#endif // HESTON_MARKET_DATA_HPP
