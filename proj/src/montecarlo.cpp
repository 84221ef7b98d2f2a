// SPDX-License-Identifier: Apache-2.0

#include "sagin/montecarlo.hpp"

#include "sagin/ao.hpp"
#include "sagin/errors.hpp"
#include "sagin/rng.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

namespace sagin {

Algorithm parseAlgorithm(std::string_view name)
{
    if (name == "ao") {
        return Algorithm::Ao;
    }
    if (name == "diwf") {
        return Algorithm::Diwf;
    }
    if (name == "ga") {
        return Algorithm::Ga;
    }
    throw ConfigError("unknown algorithm '" + std::string(name) + "' (expected ao, diwf or ga)");
}

std::string algorithmName(Algorithm algo)
{
    switch (algo) {
    case Algorithm::Ao:
        return "ao";
    case Algorithm::Diwf:
        return "diwf";
    case Algorithm::Ga:
        return "ga";
    }
    return "unknown";
}

McSummary summarize(std::span<const ConvergenceTrace> traces)
{
    if (traces.empty()) {
        throw std::invalid_argument("cannot summarize an empty trace collection");
    }
    McSummary s;
    s.n_trials = traces.size();

    std::size_t longest = 0;
    for (const auto& t : traces) {
        longest = std::max(longest, t.length());
    }
    std::vector<double> sums(longest, 0.0);
    std::vector<std::size_t> active(longest, 0);
    double final_total = 0.0;
    s.final_max_bps = -std::numeric_limits<double>::infinity();
    s.final_min_bps = std::numeric_limits<double>::infinity();
    std::size_t with_final = 0;

    for (const auto& t : traces) {
        for (std::size_t i = 0; i < t.length(); ++i) {
            sums[i] += t.sum_rate_bps[i];
            ++active[i];
        }
        ++s.histogram[t.length()];
        if (!t.converged) {
            ++s.n_not_converged;
        }
        if (t.length() > 0) {
            final_total += t.final();
            s.final_max_bps = std::max(s.final_max_bps, t.final());
            s.final_min_bps = std::min(s.final_min_bps, t.final());
            ++with_final;
        }
    }
    for (std::size_t i = 0; i < longest; ++i) {
        s.per_iteration.push_back({i + 1, sums[i] / static_cast<double>(active[i]), active[i]});
    }
    if (with_final > 0) {
        s.final_mean_bps = final_total / static_cast<double>(with_final);
    } else {
        s.final_max_bps = s.final_min_bps = 0.0;
    }
    return s;
}

std::uint64_t trialSeed(std::uint64_t master_seed, std::size_t trial)
{
    return deriveSeed(master_seed, static_cast<std::uint64_t>(trial));
}

TrialRecord runTrial(const CampaignSpec& spec, std::size_t trial, std::uint64_t seed)
{
    TrialRecord record;
    record.trial = trial;
    record.seed = seed;
    const SystemConfig& config = spec.config;
    const ChannelMatrix h = sampleChannel(deriveSeed(seed, 0), config, spec.channel);
    const std::uint64_t solver_seed = deriveSeed(seed, 1);
    const auto k_users = static_cast<std::size_t>(config.n_users);

    try {
        switch (spec.algo) {
        case Algorithm::Ao: {
            const QosSpec qos =
                spec.ao_min_rate_bps > 0.0 ? QosSpec::uniform(k_users, spec.ao_min_rate_bps) : QosSpec::none();
            record.trace = aoSolve(h, config, solver_seed, qos).trace;
            break;
        }
        case Algorithm::Diwf: {
            const std::vector<int> mapping = diwfPreassign(h);
            record.trace = diwfSolve(assignedGains(h, mapping), config, spec.diwf).trace;
            break;
        }
        case Algorithm::Ga: {
            const QosSpec qos =
                spec.ga_min_rate_bps > 0.0 ? QosSpec::uniform(k_users, spec.ga_min_rate_bps) : QosSpec::none();
            record.trace = gaSolve(h, config, qos, spec.ga, solver_seed).trace;
            break;
        }
        }
    } catch (const InfeasibleError& e) {
        record.status = TrialStatus::Infeasible;
        record.error = e.what();
        record.trace = {};
    }
    return record;
}

Campaign runCampaign(const CampaignSpec& spec, std::size_t n_trials, std::uint64_t master_seed, unsigned workers)
{
    if (n_trials < 1) {
        throw ConfigError("a campaign needs at least one trial");
    }
    spec.config.validate();
    spec.ga.validate();
    spec.diwf.validate(static_cast<std::size_t>(spec.config.n_users));

    Campaign campaign;
    campaign.spec = spec;
    campaign.n_trials = n_trials;
    campaign.master_seed = master_seed;
    campaign.trials.resize(n_trials);

    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_trials));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_trials || failed.load()) {
                return;
            }
            try {
                campaign.trials[i] = runTrial(spec, i, trialSeed(master_seed, i));
            } catch (...) {
                if (!failed.exchange(true)) {
                    failure = std::current_exception();
                }
                return;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::vector<ConvergenceTrace> feasible;
    feasible.reserve(n_trials);
    std::size_t infeasible = 0;
    for (const auto& t : campaign.trials) {
        if (t.status == TrialStatus::Ok) {
            feasible.push_back(t.trace);
        } else {
            ++infeasible;
        }
    }
    if (!feasible.empty()) {
        campaign.summary = summarize(feasible);
    }
    campaign.summary.n_trials = n_trials;
    campaign.summary.n_infeasible = infeasible;
    return campaign;
}

} // namespace sagin
