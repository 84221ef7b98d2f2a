// SPDX-License-Identifier: Apache-2.0
//
// Damped iterative water-filling over a fixed one-to-one user/subcarrier
// mapping, with per-user minimum-rate power floors.

#pragma once

#include "sagin/model.hpp"
#include "sagin/trace.hpp"

#include <span>
#include <vector>

namespace sagin {

struct DiwfParams
{
    std::vector<double> min_rate_bps; // one entry per user, or a single scalar entry
    double damping = 0.15;
    double tolerance = 1e-5; // relative sum-rate change

    static DiwfParams referenceDefaults() { return {{0.1e6}, 0.15, 1e-5}; }

    double minRate(std::size_t k) const;
    void validate(std::size_t users) const;

    friend bool operator==(const DiwfParams&, const DiwfParams&) = default;
};

struct DiwfResult
{
    std::vector<double> power;        // per user, watts
    std::vector<double> rate_bps;     // per user
    std::vector<double> min_power;    // per-user floor, watts
    ConvergenceTrace trace;           // sum rate after each damped update
    std::vector<std::vector<double>> iterates; // power vector after each update
    bool converged = false;
};

// gamma_min = 2^(r_min / B) - 1, p_min = gamma_min * noise / h.
// Throws InfeasibleError naming users with h == 0 and r_min > 0.
std::vector<double> minPowerFloor(std::span<const double> gains, std::span<const double> min_rate_bps,
                                  double bandwidth_hz, double noise_power_w);

// Users whose floors make the budget infeasible: the largest floors, in
// descending order, until their sum exceeds the budget.
std::vector<int> bindingUsers(std::span<const double> floors, double budget_w);

// Greedy one-to-one matching: users in descending order of their best gain
// each take their strongest unclaimed subcarrier. Requires K <= N.
// Returns the subcarrier index of every user.
std::vector<int> diwfPreassign(const ChannelMatrix& h);

// Per-user gain on the preassigned subcarrier.
std::vector<double> assignedGains(const ChannelMatrix& h, std::span<const int> subcarrier_of_user);

DiwfResult diwfSolve(std::span<const double> gains, const SystemConfig& config, const DiwfParams& params);

} // namespace sagin
