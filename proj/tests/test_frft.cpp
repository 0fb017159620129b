// SPDX-License-Identifier: Apache-2.0

#include "heston/frft.hpp"

#include "heston/characteristic.hpp"
#include "heston/errors.hpp"
#include "heston/pricing.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace heston;
using cplx = std::complex<double>;

namespace {

const ModelParams kParams{5.07, 0.0457, 0.48, -0.767};
const MarketState kMarket{{2026, 1, 5}, 1845.73, 0.00167, 0.01894};
constexpr double kVariance = 0.0108;
constexpr double kTau = 30.0 / 365.0;

std::vector<cplx> random_signal(std::mt19937_64& rng, std::size_t n) {
    std::vector<cplx> x(n);
    for (auto& z : x)
        z = {test_support::uniform(rng, -1.0, 1.0), test_support::uniform(rng, -1.0, 1.0)};
    return x;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
    return worst;
}

} // namespace

TEST_CASE("simpson weights reproduce the composite pattern") {
    const std::vector<double> w4 = simpson_weights(4);
    REQUIRE(w4.size() == 4);
    CHECK(w4[0] == doctest::Approx(1.0 / 3.0));
    CHECK(w4[1] == doctest::Approx(4.0 / 3.0));
    CHECK(w4[2] == doctest::Approx(2.0 / 3.0));
    CHECK(w4[3] == doctest::Approx(1.0 / 3.0));

    const std::vector<double> w6 = simpson_weights(6);
    REQUIRE(w6.size() == 6);
    const std::vector<double> want{1.0 / 3.0, 4.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, 2.0 / 3.0,
                                   1.0 / 3.0};
    for (std::size_t j = 0; j < 6; ++j) CHECK(w6[j] == doctest::Approx(want[j]));

    // Weight sum times the step approximates the interval length.
    const double eta = 0.4;
    const std::vector<double> w = simpson_weights(256);
    double sum = 0.0;
    for (double x : w) sum += x;
    CHECK(std::abs(sum * eta - 256.0 * eta) < 2.0 * eta);
}

TEST_CASE("transform weights halve the endpoints only") {
    const std::vector<double> w = transform_weights(8);
    REQUIRE(w.size() == 8);
    CHECK(w.front() == 0.5);
    CHECK(w.back() == 0.5);
    for (std::size_t j = 1; j + 1 < w.size(); ++j) CHECK(w[j] == 1.0);
}

TEST_CASE("frft of an impulse is flat") {
    for (double beta : {0.0, 1e-4, 0.01, 0.3}) {
        std::vector<cplx> x(32, cplx(0.0, 0.0));
        x[0] = 1.0;
        const std::vector<cplx> g = frft(x, beta);
        for (const cplx& z : g) CHECK(std::abs(z - cplx(1.0, 0.0)) < 1e-12);
    }
}

TEST_CASE("frft matches the direct quadratic-time sum") {
    std::mt19937_64 rng(5);

    SUBCASE("fixed size") {
        const std::vector<cplx> x = random_signal(rng, 64);
        CHECK(max_abs_diff(frft(x, 0.01), test_support::naive_frft(x, 0.01)) < 1e-10);
    }

    SUBCASE("random sizes and steps") {
        for (int rep = 0; rep < 100; ++rep) {
            const std::size_t n = std::size_t(1) << (3 + rep % 5); // 8..128
            const double beta = test_support::uniform(rng, -0.5, 0.5);
            const std::vector<cplx> x = random_signal(rng, n);
            CHECK(max_abs_diff(frft(x, beta), test_support::naive_frft(x, beta)) < 1e-10);
        }
    }
}

TEST_CASE("frft at beta = 2 pi / n degenerates to the FFT") {
    std::mt19937_64 rng(11);
    const std::size_t n = 64;
    const double beta = 2.0 * M_PI / static_cast<double>(n);
    const std::vector<cplx> x = random_signal(rng, n);
    std::vector<cplx> via_fft = x;
    fft_radix2(via_fft, +1);
    CHECK(max_abs_diff(frft(x, beta), via_fft) < 1e-10);
}

TEST_CASE("frft is linear") {
    std::mt19937_64 rng(13);
    const std::size_t n = 128;
    const double beta = 0.07;
    const std::vector<cplx> x = random_signal(rng, n);
    const std::vector<cplx> y = random_signal(rng, n);
    const cplx a(0.7, -0.4), b(-1.1, 0.2);
    std::vector<cplx> combo(n);
    for (std::size_t j = 0; j < n; ++j) combo[j] = a * x[j] + b * y[j];
    const std::vector<cplx> gx = frft(x, beta);
    const std::vector<cplx> gy = frft(y, beta);
    const std::vector<cplx> gc = frft(combo, beta);
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        worst = std::max(worst, std::abs(gc[j] - (a * gx[j] + b * gy[j])));
    CHECK(worst < 1e-12 * 128.0);
}

TEST_CASE("frft plan reuse matches the one-shot call") {
    std::mt19937_64 rng(19);
    const std::size_t n = 64;
    const double beta = 0.0123;
    const FrftPlan plan(n, beta);
    CHECK(plan.size() == n);
    CHECK(plan.beta() == beta);
    for (int rep = 0; rep < 5; ++rep) {
        const std::vector<cplx> x = random_signal(rng, n);
        CHECK(max_abs_diff(plan.execute(x), frft(x, beta)) == 0.0);
    }
}

TEST_CASE("strike grid is centred on the spot with the configured span") {
    const FrftConfig cfg;
    const StrikeGrid grid = make_strike_grid(cfg, kMarket.log_price);
    REQUIRE(grid.size() == 2048);

    // The centre node is the spot itself.
    CHECK(grid.strikes[grid.spot_index()] == doctest::Approx(kMarket.spot).epsilon(1e-14));
    CHECK(grid.log_strikes[grid.spot_index()] == doctest::Approx(kMarket.log_price));

    CHECK(grid.strikes.front() == doctest::Approx(1269.4873).epsilon(1e-4));
    CHECK(grid.strikes.back() == doctest::Approx(2682.5588).epsilon(1e-4));

    // Strike increments near the money are ~0.67 for the default config.
    const std::size_t mid = grid.spot_index();
    const double dk = grid.strikes[mid + 1] - grid.strikes[mid];
    CHECK(std::abs(dk - 0.6747) < 0.01);

    // Log-strike spacing is uniform at lambda.
    for (std::size_t j : {std::size_t(1), std::size_t(777), grid.size() - 1}) {
        CHECK(grid.log_strikes[j] - grid.log_strikes[j - 1] ==
              doctest::Approx(cfg.lambda).epsilon(1e-10));
    }

    CHECK(grid.nearest_index(kMarket.log_price) == mid);
    CHECK(grid.node_distance(kMarket.log_price) < 1e-12);
    CHECK(grid.nearest_index(grid.log_strikes[3] + 0.4 * cfg.lambda) == 3);
}

TEST_CASE("grid prices match the adaptive pricer at the money") {
    const FrftConfig cfg;
    const GridValues gv = price_grid(+1, kTau, cfg, kParams, kMarket, kVariance);
    const std::size_t mid = gv.grid.spot_index();
    const double direct =
        price_direct(OptionSpec::call(gv.grid.strikes[mid], kTau), kParams, kMarket, kVariance);
    CHECK(std::abs(gv.values[mid] - direct) / direct < 1e-6);
}

TEST_CASE("grid prices match the adaptive pricer across the central strikes") {
    const FrftConfig cfg;
    const GridValues gv = price_grid(+1, kTau, cfg, kParams, kMarket, kVariance);
    const std::size_t mid = gv.grid.spot_index();
    // Spot-checks across the central +-100 nodes; the full 200-strike sweep
    // is the acceptance run.
    for (std::size_t j = mid - 100; j <= mid + 100; j += 25) {
        const double direct = price_direct(OptionSpec::call(gv.grid.strikes[j], kTau), kParams,
                                           kMarket, kVariance);
        CHECK(std::abs(gv.values[j] - direct) / direct < 1e-6);
    }
}

TEST_CASE("put grid satisfies parity against the call grid") {
    const FrftConfig cfg;
    const GridValues calls = price_grid(+1, kTau, cfg, kParams, kMarket, kVariance);
    const GridValues puts = price_grid(-1, kTau, cfg, kParams, kMarket, kVariance);
    const double df_s = kMarket.spot * std::exp(-kMarket.dividend_yield * kTau);
    const double df = std::exp(-kMarket.rate * kTau);
    double worst = 0.0;
    for (std::size_t j = 0; j < calls.grid.size(); ++j) {
        const double parity = df_s - calls.grid.strikes[j] * df;
        worst = std::max(worst, std::abs(calls.values[j] - puts.values[j] - parity));
    }
    CHECK(worst < 1e-6 * kMarket.spot);

    // The put grid also has to agree with the independent quadrature path.
    const std::size_t mid = puts.grid.spot_index();
    const double direct =
        price_direct(OptionSpec::put(puts.grid.strikes[mid], kTau), kParams, kMarket, kVariance);
    CHECK(std::abs(puts.values[mid] - direct) / direct < 1e-6);
}

TEST_CASE("weighted grid with unit factor reproduces the price grid") {
    const FrftConfig cfg(256, 0.4, 3.6549e-4, 1.5);
    const GridValues plain = price_grid(+1, kTau, cfg, kParams, kMarket, kVariance);
    const GridValues weighted = weighted_grid(+1, kTau, cfg, kParams, kMarket, kVariance,
                                              [](cplx) { return cplx(1.0, 0.0); });
    CHECK(max_abs_diff({plain.values.begin(), plain.values.end()},
                       {weighted.values.begin(), weighted.values.end()}) == 0.0);
}

TEST_CASE("taking the real part after the transform matches the real-part sum") {
    // The transform sums complex terms and takes Re at the end; the direct
    // formulation applies Re inside the sum. Both describe the same real
    // number, so the grid must agree with the Re-inside evaluation.
    const FrftConfig cfg(256, 0.4, 3.6549e-4, 1.5);
    const GridValues gv = price_grid(+1, kTau, cfg, kParams, kMarket, kVariance);
    const std::vector<double> w = transform_weights(cfg.n);
    const double b = cfg.half_span();
    for (std::size_t u : {std::size_t(0), std::size_t(50), std::size_t(128), std::size_t(200),
                          std::size_t(255)}) {
        const double k = gv.grid.log_strikes[u];
        double sum = 0.0;
        for (std::size_t j = 0; j < cfg.n; ++j) {
            const double phi = static_cast<double>(j) * cfg.eta;
            const cplx e = damped_integrand(+1, cfg.alpha, phi, kTau, kParams, kMarket, kVariance);
            const cplx twiddle = std::exp(cplx(0.0, (b - kMarket.log_price) * phi));
            const cplx kernel = std::exp(cplx(0.0, -cfg.beta() * static_cast<double>(u * j)));
            sum += (kernel * twiddle * e * w[j]).real();
        }
        const double want = (cfg.eta / M_PI) * std::exp(-cfg.alpha * k) * sum;
        CHECK(gv.values[u] == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("frft config rejects invalid shapes") {
    CHECK_THROWS_AS(FrftConfig(0, 0.4, 3.6549e-4, 1.5), ConfigError);
    CHECK_THROWS_AS(FrftConfig(100, 0.4, 3.6549e-4, 1.5), ConfigError); // not a power of two
    CHECK_THROWS_AS(FrftConfig(256, -0.4, 3.6549e-4, 1.5), ConfigError);
    CHECK_THROWS_AS(FrftConfig(256, 0.4, 0.0, 1.5), ConfigError);
    CHECK_THROWS_AS(FrftConfig(256, 0.4, 3.6549e-4, 0.0), ConfigError);
}

TEST_CASE("grid construction refuses damping poles") {
    // alpha = 0 puts a zero of the damping denominator at phi = 0. Only
    // reachable by mutating a config in place; the constructor rejects it.
    FrftConfig cfg;
    cfg.n = 256;
    cfg.alpha = 0.0;
    CHECK_THROWS_AS(price_grid(+1, kTau, cfg, kParams, kMarket, kVariance), GridError);

    // alpha = 1 is fine for both types: puts ride the call transform.
    const FrftConfig unit_alpha(256, 0.4, 3.6549e-4, 1.0);
    CHECK_NOTHROW(price_grid(-1, kTau, unit_alpha, kParams, kMarket, kVariance));
    CHECK_NOTHROW(price_grid(+1, kTau, unit_alpha, kParams, kMarket, kVariance));
}
