// SPDX-License-Identifier: Apache-2.0

#include "heston/types.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace heston;

namespace {

std::string thrown_message(void (*fn)()) {
    try {
        fn();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("model parameter constraints name the violated bound") {
    CHECK_NOTHROW(ModelParams(5.07, 0.0457, 0.48, -0.767));
    CHECK(thrown_message([] { ModelParams(0.0, 0.1, 0.5, 0.0); }) == "kappa must be > 0");
    CHECK(thrown_message([] { ModelParams(1.0, 0.0, 0.5, 0.0); }) == "theta must be > 0");
    CHECK(thrown_message([] { ModelParams(1.0, 0.1, 0.0, 0.0); }) == "sigma must be > 0");
    CHECK(thrown_message([] { ModelParams(1.0, 0.1, 0.5, 1.5); }) ==
          "rho must lie in [-1, 1]");
    CHECK_NOTHROW(ModelParams(1.0, 0.1, 0.5, -1.0)); // boundary values admitted
    CHECK_NOTHROW(ModelParams(1.0, 0.1, 0.5, 1.0));
}

TEST_CASE("feller diagnostic and sqrt_theta") {
    const ModelParams feller(5.07, 0.0457, 0.48, -0.767); // 2*5.07*0.0457 = 0.4634 > 0.2304
    CHECK(feller.feller_satisfied());
    const ModelParams violating(0.5, 0.01, 0.5, 0.0); // 0.01 < 0.25
    CHECK_FALSE(violating.feller_satisfied());
    CHECK(feller.sqrt_theta() == doctest::Approx(std::sqrt(0.0457)).epsilon(1e-15));
}

TEST_CASE("market state derives the log price") {
    const MarketState m({2026, 1, 5}, 1845.73, 0.00167, 0.01894);
    CHECK(m.log_price == std::log(1845.73));
    CHECK_THROWS_AS(MarketState({2026, 1, 5}, 0.0, 0.0, 0.0), ConfigError);
    CHECK_THROWS_AS(MarketState({2026, 1, 5}, -1.0, 0.0, 0.0), ConfigError);
}

TEST_CASE("option spec validates and exposes the payoff type") {
    const OptionSpec call = OptionSpec::call(1845.73, 30.0 / 365.0);
    CHECK(call.epsilon == 1);
    CHECK(call.is_call());
    CHECK(call.log_strike == std::log(1845.73));
    const OptionSpec put = OptionSpec::put(1845.73, 30.0 / 365.0);
    CHECK(put.epsilon == -1);
    CHECK_FALSE(put.is_call());

    CHECK_THROWS_AS(OptionSpec(0, 100.0, 1.0), ConfigError);
    CHECK_THROWS_AS(OptionSpec(1, 0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(OptionSpec(1, 100.0, 0.0), ConfigError);
    CHECK_THROWS_AS(OptionSpec(1, 100.0, -1.0), ConfigError);
}

TEST_CASE("quadrature presets scale with the spot") {
    const QuadratureConfig q = QuadratureConfig::for_spot(1845.73);
    CHECK(q.abs_tol == doctest::Approx(1e-10 * 1845.73));
    const QuadratureConfig tight = QuadratureConfig::tight(1845.73);
    CHECK(tight.abs_tol == doctest::Approx(1e-13 * 1845.73));
    CHECK(tight.abs_tol < q.abs_tol);
}
