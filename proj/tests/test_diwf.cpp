// SPDX-License-Identifier: Apache-2.0

#include "helpers.hpp"
#include "oracles.hpp"

#include "sagin/diwf.hpp"
#include "sagin/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace sagin;
using testing::channel;
using testing::smallConfig;

TEST_CASE("minimum power floor inverts the Shannon rate")
{
    const std::vector<double> h{2.0, 0.5};
    const std::vector<double> r{100e3, 200e3};
    const auto p = minPowerFloor(h, r, 100e3, 1e-9);
    CHECK(p[0] == doctest::Approx(1.0 * 1e-9 / 2.0));
    CHECK(p[1] == doctest::Approx(3.0 * 1e-9 / 0.5));
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(oracle::linkRate(p[k], h[k], 100e3, 1e-9) == doctest::Approx(r[k]));
    }
}

TEST_CASE("a zero-gain user with a rate target is infeasible")
{
    const std::vector<double> h{1.0, 0.0, 0.0};
    const std::vector<double> r{1.0, 1.0, 0.0};
    try {
        minPowerFloor(h, r, 1.0, 1.0);
        FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
        CHECK(e.users() == std::vector<int>{1});
    }
}

TEST_CASE("binding users are the largest floors until the budget breaks")
{
    const std::vector<double> floors{0.5, 3.0, 1.0, 2.0};
    CHECK(bindingUsers(floors, 4.5) == std::vector<int>{1, 3});
    CHECK(bindingUsers(floors, 5.5) == std::vector<int>{1, 3, 2});
}

TEST_CASE("preassignment is one-to-one and greedy")
{
    const auto h = channel({{5.0, 1.0, 0.0}, {4.0, 3.0, 1.0}, {9.0, 8.0, 2.0}});
    const auto m = diwfPreassign(h);
    // User 2 (best gain 9) goes first, then user 0 (5), then user 1.
    CHECK(m == std::vector<int>{1, 2, 0});
    CHECK(assignedGains(h, m) == std::vector<double>{1.0, 1.0, 9.0});
    CHECK_THROWS_AS(diwfPreassign(channel({{1.0}, {1.0}})), ConfigError);
}

TEST_CASE("DIWF iterates stay feasible and approach the floored optimum")
{
    const std::vector<double> h{4.0, 1.0, 0.05, 0.6};
    SystemConfig c = smallConfig(4, 4, 1.0, 3.0, 1.0);
    c.max_iterations = 2000;
    const DiwfParams params{{0.1}, 0.15, 1e-10};
    const DiwfResult r = diwfSolve(h, c, params);
    CHECK(r.converged);
    REQUIRE(r.iterates.size() == r.trace.length());
    for (const auto& p : r.iterates) {
        double total = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            CHECK(p[k] >= r.min_power[k]);
            total += p[k];
        }
        CHECK(total <= c.power_budget_w + kFeasibilityTolerance);
    }
    for (std::size_t i = 1; i < r.trace.length(); ++i) {
        CHECK(r.trace.sum_rate_bps[i] >= r.trace.sum_rate_bps[i - 1] * (1.0 - 1e-12));
    }
    const auto target = oracle::flooredWaterfill(h, r.min_power, 3.0, 1.0);
    const double best = oracle::sumRate(target, h, 1.0, 1.0);
    CHECK(std::abs(r.trace.final() - best) <= 1e-6 * best);
    for (std::size_t k = 0; k < h.size(); ++k) {
        CHECK(r.rate_bps[k] >= 0.1 * (1.0 - 1e-9));
    }
}

TEST_CASE("DIWF reports infeasible floors")
{
    const std::vector<double> h{1e-3, 1e-3};
    SystemConfig c = smallConfig(2, 2, 1.0, 1.0, 1.0);
    try {
        diwfSolve(h, c, DiwfParams{{1.0}, 0.15, 1e-5});
        FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
        CHECK(std::string(e.what()).find("budget") != std::string::npos);
        // One floor alone already exceeds the budget.
        CHECK(e.users() == std::vector<int>{0});
    }
}

TEST_CASE("DIWF parameters")
{
    const DiwfParams d = DiwfParams::referenceDefaults();
    CHECK(d.minRate(0) == 0.1e6);
    CHECK(d.minRate(11) == 0.1e6);
    CHECK(d.damping == 0.15);
    CHECK(d.tolerance == 1e-5);
    CHECK_NOTHROW(d.validate(12));
    CHECK_THROWS_AS((DiwfParams{{1.0, 2.0}, 0.15, 1e-5}.validate(3)), ConfigError);
    CHECK_THROWS_AS((DiwfParams{{1.0}, 0.0, 1e-5}.validate(1)), ConfigError);
    CHECK_THROWS_AS((DiwfParams{{1.0}, 1.5, 1e-5}.validate(1)), ConfigError);
    CHECK_THROWS_AS((DiwfParams{{-1.0}, 0.5, 1e-5}.validate(1)), ConfigError);
    CHECK_NOTHROW((DiwfParams{{1.0, 2.0}, 1.0, 1e-5}.validate(2)));
}
