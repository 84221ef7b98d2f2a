// SPDX-License-Identifier: Apache-2.0

#include "sagin/errors.hpp"
#include "sagin/montecarlo.hpp"

#include <doctest.h>

using namespace sagin;

namespace {

ConvergenceTrace trace(std::vector<double> values, bool converged = true) { return {std::move(values), converged}; }

} // namespace

TEST_CASE("per-iteration means use only the trials still running")
{
    const std::vector<ConvergenceTrace> traces{trace({1.0, 2.0}), trace({1.0})};
    const McSummary s = summarize(traces);
    REQUIRE(s.per_iteration.size() == 2);
    CHECK(s.per_iteration[0] == IterationStat{1, 1.0, 2});
    CHECK(s.per_iteration[1] == IterationStat{2, 2.0, 1});
    CHECK(s.histogram == std::map<std::size_t, std::size_t>{{1, 1}, {2, 1}});
    CHECK(s.final_mean_bps == doctest::Approx(1.5));
    CHECK(s.final_max_bps == 2.0);
    CHECK(s.final_min_bps == 1.0);
    CHECK(s.n_trials == 2);
}

TEST_CASE("active counts decline as trials converge")
{
    const std::vector<ConvergenceTrace> traces{trace({3.0, 4.0, 5.0}), trace({1.0, 2.0}), trace({6.0}),
                                               trace({2.0, 2.0, 2.0}, false)};
    const McSummary s = summarize(traces);
    REQUIRE(s.per_iteration.size() == 3);
    CHECK(s.per_iteration[0].active == 4);
    CHECK(s.per_iteration[0].mean_bps == doctest::Approx(3.0));
    CHECK(s.per_iteration[1].active == 3);
    CHECK(s.per_iteration[1].mean_bps == doctest::Approx(8.0 / 3.0));
    CHECK(s.per_iteration[2].active == 2);
    CHECK(s.per_iteration[2].mean_bps == doctest::Approx(3.5));
    CHECK(s.n_not_converged == 1);
    CHECK(s.histogram.at(3) == 2);
}

TEST_CASE("a single trace summarizes to itself")
{
    const std::vector<ConvergenceTrace> traces{trace({1.5, 2.5, 3.5})};
    const McSummary s = summarize(traces);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(s.per_iteration[i].mean_bps == traces[0].sum_rate_bps[i]);
        CHECK(s.per_iteration[i].active == 1);
    }
}

TEST_CASE("summarizing nothing is an error")
{
    CHECK_THROWS_AS(summarize(std::vector<ConvergenceTrace>{}), std::invalid_argument);
}

TEST_CASE("algorithm names")
{
    CHECK(parseAlgorithm("ga") == Algorithm::Ga);
    CHECK(algorithmName(Algorithm::Diwf) == "diwf");
    CHECK_THROWS_AS(parseAlgorithm("pso"), ConfigError);
}

TEST_CASE("trial seeds are stable and distinct")
{
    CHECK(trialSeed(1, 0) == trialSeed(1, 0));
    CHECK(trialSeed(1, 0) != trialSeed(1, 1));
    CHECK(trialSeed(1, 0) != trialSeed(2, 0));
}

TEST_CASE("one-trial campaign equals the single run")
{
    CampaignSpec spec;
    spec.algo = Algorithm::Ao;
    const Campaign c = runCampaign(spec, 1, 77);
    const TrialRecord direct = runTrial(spec, 0, trialSeed(77, 0));
    REQUIRE(c.trials.size() == 1);
    CHECK(c.trials[0] == direct);
    CHECK(c.summary.final_mean_bps == direct.trace.final());
}

TEST_CASE("campaign results do not depend on the worker count")
{
    for (Algorithm algo : {Algorithm::Ao, Algorithm::Diwf, Algorithm::Ga}) {
        CampaignSpec spec;
        spec.algo = algo;
        spec.ga.n_generations = 5;
        const Campaign one = runCampaign(spec, 40, 5, 1);
        const Campaign four = runCampaign(spec, 40, 5, 4);
        CHECK(one.summary == four.summary);
        CHECK(one.trials == four.trials);
    }
}

TEST_CASE("infeasible trials are counted and left out of the averages")
{
    CampaignSpec spec;
    spec.algo = Algorithm::Diwf;
    spec.diwf.min_rate_bps = {5e6};
    const Campaign c = runCampaign(spec, 5, 1);
    CHECK(c.summary.n_infeasible == 5);
    CHECK(c.summary.per_iteration.empty());
    for (const auto& t : c.trials) {
        CHECK(t.status == TrialStatus::Infeasible);
        CHECK_FALSE(t.error.empty());
    }
}

TEST_CASE("campaign validates before running")
{
    CampaignSpec spec;
    CHECK_THROWS_AS(runCampaign(spec, 0, 1), ConfigError);
    spec.config.power_budget_w = 0.0;
    CHECK_THROWS_AS(runCampaign(spec, 1, 1), ConfigError);
}
