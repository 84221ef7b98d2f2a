// SPDX-License-Identifier: Apache-2.0
//
// Genetic algorithm over joint (permutation assignment, power vector)
// chromosomes. Exclusivity is structural: the assignment is always a
// bijection after repair. Power and QoS violations are penalized in the
// fitness.

#pragma once

#include "sagin/model.hpp"
#include "sagin/trace.hpp"

#include <cstdint>
#include <vector>

namespace sagin {

struct GaParams
{
    int population_size = 40;
    int n_generations = 30;
    double mutation_rate = 0.1;
    double penalty_power = 1e9; // per watt over budget
    double penalty_qos = 1e9;   // per bit/s of shortfall
    bool swap_mutation = false;

    void validate() const;

    friend bool operator==(const GaParams&, const GaParams&) = default;
};

struct Chromosome
{
    std::vector<int> assignment; // subcarrier of each user
    std::vector<double> power;   // watts, per user

    friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

struct PopulationStats
{
    double mean_fitness = 0.0;
    double min_fitness = 0.0;
    double max_fitness = 0.0;
};

struct GaResult
{
    Chromosome best;
    double best_fitness = 0.0;
    ConvergenceTrace trace; // best fitness after each generation
    PopulationStats final_population;
};

// Duplicate or out-of-range subcarrier claims are moved, in user order, to
// the unclaimed subcarriers in ascending order. Negative or non-finite powers
// become zero, and the vector is rescaled onto the budget when it exceeds it.
Chromosome repair(Chromosome chrom, const SystemConfig& config);

Allocation toAllocation(const Chromosome& chrom, std::size_t subcarriers);

// sum_rate - penalty_power * overshoot - penalty_qos * total shortfall.
// Exactly the sum rate when the chromosome is feasible.
double fitness(const Chromosome& chrom, const ChannelMatrix& h, const SystemConfig& config, const QosSpec& qos,
               const GaParams& params);

// Requires K == N. Deterministic for a fixed seed.
GaResult gaSolve(const ChannelMatrix& h, const SystemConfig& config, const QosSpec& qos, const GaParams& params,
                 std::uint64_t seed);

// Same loop from a caller-supplied population (repaired before use).
GaResult gaEvolve(const ChannelMatrix& h, const SystemConfig& config, const QosSpec& qos, const GaParams& params,
                  std::uint64_t seed, std::vector<Chromosome> population);

} // namespace sagin
