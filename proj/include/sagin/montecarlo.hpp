// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo campaigns: one fresh channel draw per trial, one solver run per
// draw, and per-iteration averages taken over the trials still running at
// that iteration.

#pragma once

#include "sagin/diwf.hpp"
#include "sagin/ga.hpp"
#include "sagin/model.hpp"
#include "sagin/trace.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sagin {

enum class Algorithm { Ao, Diwf, Ga };

Algorithm parseAlgorithm(std::string_view name);
std::string algorithmName(Algorithm algo);

struct CampaignSpec
{
    Algorithm algo = Algorithm::Ao;
    SystemConfig config;
    ChannelModel channel;
    double ao_min_rate_bps = 0.0;
    DiwfParams diwf = DiwfParams::referenceDefaults();
    GaParams ga;
    double ga_min_rate_bps = 0.0;
};

struct IterationStat
{
    std::size_t iteration = 0; // 1-based
    double mean_bps = 0.0;
    std::size_t active = 0;

    friend bool operator==(const IterationStat&, const IterationStat&) = default;
};

struct McSummary
{
    std::vector<IterationStat> per_iteration;
    double final_mean_bps = 0.0;
    double final_max_bps = 0.0;
    double final_min_bps = 0.0;
    // trace length -> number of trials that stopped there
    std::map<std::size_t, std::size_t> histogram;
    std::size_t n_trials = 0;
    std::size_t n_infeasible = 0;
    std::size_t n_not_converged = 0;

    friend bool operator==(const McSummary&, const McSummary&) = default;
};

// mean[it] = sum over traces reaching `it` / number of such traces.
// Throws std::invalid_argument on an empty collection.
McSummary summarize(std::span<const ConvergenceTrace> traces);

enum class TrialStatus { Ok, Infeasible };

struct TrialRecord
{
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    TrialStatus status = TrialStatus::Ok;
    ConvergenceTrace trace;
    std::string error;

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct Campaign
{
    CampaignSpec spec;
    std::size_t n_trials = 0;
    std::uint64_t master_seed = 0;
    McSummary summary;
    std::vector<TrialRecord> trials;
};

std::uint64_t trialSeed(std::uint64_t master_seed, std::size_t trial);

// Runs one trial from its seed. Infeasibility is reported in the record.
TrialRecord runTrial(const CampaignSpec& spec, std::size_t trial, std::uint64_t seed);

// Results do not depend on `workers` (0 means one per hardware thread).
Campaign runCampaign(const CampaignSpec& spec, std::size_t n_trials, std::uint64_t master_seed, unsigned workers = 1);

} // namespace sagin
