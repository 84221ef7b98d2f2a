// SPDX-License-Identifier: Apache-2.0

#include "sagin/ga.hpp"

#include "sagin/errors.hpp"
#include "sagin/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace sagin {

namespace {

void requireSquare(const ChannelMatrix& h, const SystemConfig& config)
{
    if (h.users() != h.subcarriers()) {
        throw ConfigError("the genetic algorithm supports K == N only (got K=" + std::to_string(h.users()) +
                          ", N=" + std::to_string(h.subcarriers()) + ")");
    }
    if (static_cast<int>(h.users()) != config.n_users || static_cast<int>(h.subcarriers()) != config.n_subcarriers) {
        throw std::invalid_argument("channel matrix dimensions do not match the system configuration");
    }
}

// Order crossover at a single cut: head of `head`, then the genes of `tail`
// in order, skipping subcarriers already taken. Powers are cut at the same point.
Chromosome crossover(const Chromosome& head, const Chromosome& tail, std::size_t cut)
{
    const std::size_t k_users = head.assignment.size();
    Chromosome child;
    child.assignment.reserve(k_users);
    std::vector<char> taken(k_users, 0);
    for (std::size_t i = 0; i < cut; ++i) {
        child.assignment.push_back(head.assignment[i]);
        taken[static_cast<std::size_t>(head.assignment[i])] = 1;
    }
    for (int s : tail.assignment) {
        if (child.assignment.size() == k_users) {
            break;
        }
        if (!taken[static_cast<std::size_t>(s)]) {
            child.assignment.push_back(s);
            taken[static_cast<std::size_t>(s)] = 1;
        }
    }
    child.power.assign(head.power.begin(), head.power.begin() + static_cast<std::ptrdiff_t>(cut));
    child.power.insert(child.power.end(), tail.power.begin() + static_cast<std::ptrdiff_t>(cut), tail.power.end());
    return child;
}

void mutate(Chromosome& chrom, const SystemConfig& config, const GaParams& params, Rng& rng)
{
    const double budget = config.power_budget_w;
    const double sigma = 0.1 * budget / static_cast<double>(chrom.power.size());
    std::bernoulli_distribution hit(params.mutation_rate);
    std::normal_distribution<double> step(0.0, sigma);
    for (double& p : chrom.power) {
        if (hit(rng)) {
            p = std::clamp(p + step(rng), 0.0, budget);
        }
    }
    if (params.swap_mutation && chrom.assignment.size() > 1 && hit(rng)) {
        std::uniform_int_distribution<std::size_t> pick(0, chrom.assignment.size() - 1);
        std::swap(chrom.assignment[pick(rng)], chrom.assignment[pick(rng)]);
    }
}

PopulationStats statsOf(const std::vector<double>& fit)
{
    PopulationStats s;
    s.min_fitness = *std::min_element(fit.begin(), fit.end());
    s.max_fitness = *std::max_element(fit.begin(), fit.end());
    s.mean_fitness = std::accumulate(fit.begin(), fit.end(), 0.0) / static_cast<double>(fit.size());
    return s;
}

std::size_t argmax(const std::vector<double>& v)
{
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

} // namespace

void GaParams::validate() const
{
    if (population_size < 2) {
        throw ConfigError("population_size must be >= 2");
    }
    if (n_generations < 1) {
        throw ConfigError("n_generations must be >= 1");
    }
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
        throw ConfigError("mutation_rate must lie in [0, 1]");
    }
    if (!(penalty_power >= 0.0) || !(penalty_qos >= 0.0)) {
        throw ConfigError("penalty weights must be nonnegative");
    }
}

Chromosome repair(Chromosome chrom, const SystemConfig& config)
{
    const auto n_sub = static_cast<std::size_t>(config.n_subcarriers);
    const std::size_t k_users = chrom.assignment.size();
    if (k_users > n_sub) {
        throw ConfigError("chromosome has more users than subcarriers");
    }

    std::vector<char> claimed(n_sub, 0);
    std::vector<std::size_t> pending;
    for (std::size_t k = 0; k < k_users; ++k) {
        const int s = chrom.assignment[k];
        if (s >= 0 && static_cast<std::size_t>(s) < n_sub && !claimed[static_cast<std::size_t>(s)]) {
            claimed[static_cast<std::size_t>(s)] = 1;
        } else {
            pending.push_back(k);
        }
    }
    std::size_t next_free = 0;
    for (std::size_t k : pending) {
        while (claimed[next_free]) {
            ++next_free;
        }
        chrom.assignment[k] = static_cast<int>(next_free);
        claimed[next_free] = 1;
    }

    chrom.power.resize(k_users, 0.0);
    double total = 0.0;
    for (double& p : chrom.power) {
        if (!std::isfinite(p) || p < 0.0) {
            p = 0.0;
        }
        total += p;
    }
    if (total > config.power_budget_w) {
        const double scale = config.power_budget_w / total;
        for (double& p : chrom.power) {
            p *= scale;
        }
    }
    return chrom;
}

Allocation toAllocation(const Chromosome& chrom, std::size_t subcarriers)
{
    Allocation alloc = Allocation::empty(chrom.assignment.size(), subcarriers);
    for (std::size_t k = 0; k < chrom.assignment.size(); ++k) {
        const auto n = static_cast<std::size_t>(chrom.assignment[k]);
        alloc.assignment(k, n) = 1;
        alloc.power(k, n) = chrom.power[k];
    }
    return alloc;
}

double fitness(const Chromosome& chrom, const ChannelMatrix& h, const SystemConfig& config, const QosSpec& qos,
               const GaParams& params)
{
    const ConstraintReport report = checkConstraints(toAllocation(chrom, h.subcarriers()), h, config, qos);
    double value = report.rates.sum_rate;
    if (!report.powerOk()) {
        value -= params.penalty_power * report.power_overshoot;
    }
    if (!report.qosOk()) {
        value -= params.penalty_qos * report.total_shortfall;
    }
    return value;
}

GaResult gaSolve(const ChannelMatrix& h, const SystemConfig& config, const QosSpec& qos, const GaParams& params,
                 std::uint64_t seed)
{
    config.validate();
    params.validate();
    requireSquare(h, config);

    // The initial population draws from its own stream so gaEvolve can be
    // replayed with the same seed.
    auto rng = makeRng(deriveSeed(seed, 0));
    const std::size_t k_users = h.users();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Chromosome> population(static_cast<std::size_t>(params.population_size));
    for (auto& chrom : population) {
        chrom.assignment.resize(k_users);
        std::iota(chrom.assignment.begin(), chrom.assignment.end(), 0);
        std::shuffle(chrom.assignment.begin(), chrom.assignment.end(), rng);
        chrom.power.resize(k_users);
        double total = 0.0;
        for (double& p : chrom.power) {
            p = unit(rng);
            total += p;
        }
        for (double& p : chrom.power) {
            p *= config.power_budget_w / total;
        }
    }
    return gaEvolve(h, config, qos, params, seed, std::move(population));
}

GaResult gaEvolve(const ChannelMatrix& h, const SystemConfig& config, const QosSpec& qos, const GaParams& params,
                  std::uint64_t seed, std::vector<Chromosome> population)
{
    config.validate();
    params.validate();
    requireSquare(h, config);
    if (population.size() < 2) {
        throw ConfigError("population must hold at least two chromosomes");
    }
    const std::size_t pop_size = population.size();
    const std::size_t k_users = h.users();

    std::vector<double> fit(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) {
        population[i] = repair(std::move(population[i]), config);
        fit[i] = fitness(population[i], h, config, qos, params);
    }

    auto rng = makeRng(deriveSeed(seed, 1));
    std::uniform_int_distribution<std::size_t> cut_point(1, k_users > 1 ? k_users - 1 : 1);
    GaResult result;

    for (int gen = 0; gen < params.n_generations; ++gen) {
        const std::size_t elite = argmax(fit);
        const double lowest = *std::min_element(fit.begin(), fit.end());
        const double eps = 1e-9 * std::max(1.0, std::abs(lowest));
        std::vector<double> weights(pop_size);
        for (std::size_t i = 0; i < pop_size; ++i) {
            weights[i] = fit[i] - lowest + eps;
        }
        std::discrete_distribution<std::size_t> roulette(weights.begin(), weights.end());

        std::vector<Chromosome> next{population[elite]};
        std::vector<double> next_fit{fit[elite]};
        next.reserve(pop_size);
        while (next.size() < pop_size) {
            const Chromosome& a = population[roulette(rng)];
            const Chromosome& b = population[roulette(rng)];
            const std::size_t cut = k_users > 1 ? cut_point(rng) : k_users;
            for (Chromosome child : {crossover(a, b, cut), crossover(b, a, cut)}) {
                if (next.size() == pop_size) {
                    break;
                }
                mutate(child, config, params, rng);
                child = repair(std::move(child), config);
                next_fit.push_back(fitness(child, h, config, qos, params));
                next.push_back(std::move(child));
            }
        }
        population = std::move(next);
        fit = std::move(next_fit);
        result.trace.sum_rate_bps.push_back(fit[argmax(fit)]);
    }

    const std::size_t best = argmax(fit);
    result.best = population[best];
    result.best_fitness = fit[best];
    result.final_population = statsOf(fit);
    result.trace.converged = true;
    return result;
}

} // namespace sagin
