// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include "sagin/errors.hpp"
#include "sagin/rng.hpp"
#include "sagin/waterfill.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace sagin;

namespace {

double total(const std::vector<double>& p) { return std::accumulate(p.begin(), p.end(), 0.0); }

} // namespace

TEST_CASE("two links with gains 3 and 1")
{
    const std::vector<double> h{3.0, 1.0};
    const auto sol = waterfill(h, 2.0, 1.0);
    CHECK(sol.power[0] == doctest::Approx(4.0 / 3.0));
    CHECK(sol.power[1] == doctest::Approx(2.0 / 3.0));
    CHECK(sol.water_level == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("a hopeless link gets nothing")
{
    const std::vector<double> h{1e6, 1e-6};
    const auto p = waterfillPower(h, 1.0, 1.0);
    CHECK(p[1] == 0.0);
    CHECK(p[0] == doctest::Approx(1.0));
}

TEST_CASE("equal gains split the budget evenly")
{
    const std::vector<double> h(5, 0.7);
    for (double p : waterfillPower(h, 10.0, 0.3)) {
        CHECK(p == doctest::Approx(2.0));
    }
}

TEST_CASE("grid search finds no better two-link split")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> gain(0.05, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<double> h{gain(rng), gain(rng)};
        const double budget = 2.0;
        const auto p = waterfillPower(h, budget, 1.0);
        const double ours = oracle::sumRate(p, h, 1.0, 1.0);
        double best = 0.0;
        for (int i = 0; i <= 20000; ++i) {
            const double p0 = budget * i / 20000.0;
            best = std::max(best, oracle::sumRate({p0, budget - p0}, h, 1.0, 1.0));
        }
        CHECK(ours >= best - 1e-9);
        CHECK(ours - best < 1e-6);
    }
}

TEST_CASE("matches the closed-form oracle on random sets")
{
    auto rng = makeRng(5);
    std::exponential_distribution<double> gain(1.0);
    std::uniform_real_distribution<double> log_noise(-4.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t k = 1 + trial % 12;
        std::vector<double> h(k);
        for (double& g : h) {
            g = gain(rng) + 1e-12;
        }
        const double noise = std::pow(10.0, log_noise(rng));
        const auto p = waterfillPower(h, 3.0, noise);
        const auto q = oracle::waterfill(h, 3.0, noise);
        CHECK(total(p) == doctest::Approx(3.0).epsilon(1e-12));
        for (std::size_t i = 0; i < k; ++i) {
            CHECK(p[i] >= 0.0);
            CHECK(std::abs(p[i] - q[i]) <= 1e-9 * 3.0);
        }
    }
}

TEST_CASE("water-filling preconditions")
{
    const std::vector<double> empty;
    const std::vector<double> ok{1.0};
    const std::vector<double> zero{1.0, 0.0};
    CHECK_THROWS(waterfill(empty, 1.0, 1.0));
    CHECK_THROWS(waterfill(ok, 0.0, 1.0));
    CHECK_THROWS(waterfill(zero, 1.0, 1.0));
}

TEST_CASE("floors that do not bind leave plain water-filling")
{
    const std::vector<double> h{3.0, 1.0};
    const std::vector<double> floors{0.1, 0.1};
    const auto p = waterfillWithFloors(h, floors, 2.0, 1.0);
    CHECK(p[0] == doctest::Approx(4.0 / 3.0));
    CHECK(p[1] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("a binding floor is met exactly and the rest is re-filled")
{
    const std::vector<double> h{10.0, 10.0, 0.01};
    const std::vector<double> floors{0.0, 0.0, 0.5};
    const auto p = waterfillWithFloors(h, floors, 1.0, 1.0);
    CHECK(p[2] == doctest::Approx(0.5));
    CHECK(p[0] == doctest::Approx(0.25));
    CHECK(p[1] == doctest::Approx(0.25));
}

TEST_CASE("floored water-filling matches the bisection oracle")
{
    auto rng = makeRng(9);
    std::exponential_distribution<double> gain(1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t k = 2 + trial % 10;
        std::vector<double> h(k);
        std::vector<double> floors(k);
        double floor_sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            h[i] = gain(rng);
            floors[i] = unit(rng) < 0.5 ? 0.0 : unit(rng);
            floor_sum += floors[i];
        }
        const double budget = floor_sum + 0.1 + 3.0 * unit(rng);
        const auto p = waterfillWithFloors(h, floors, budget, 0.5);
        const auto q = oracle::flooredWaterfill(h, floors, budget, 0.5);
        CHECK(total(p) == doctest::Approx(budget).epsilon(1e-12));
        for (std::size_t i = 0; i < k; ++i) {
            CHECK(p[i] >= floors[i]);
            CHECK(std::abs(p[i] - q[i]) <= 1e-8 * budget);
        }
    }
}

TEST_CASE("floors above the budget are infeasible")
{
    const std::vector<double> h{1.0, 1.0};
    const std::vector<double> floors{0.7, 0.7};
    CHECK_THROWS_AS(waterfillWithFloors(h, floors, 1.0, 1.0), InfeasibleError);
}

TEST_CASE("zero-gain link keeps its zero floor")
{
    const std::vector<double> h{1.0, 0.0};
    const std::vector<double> floors{0.0, 0.0};
    const auto p = waterfillWithFloors(h, floors, 1.0, 1.0);
    CHECK(p[1] == 0.0);
    CHECK(p[0] == doctest::Approx(1.0));
}
