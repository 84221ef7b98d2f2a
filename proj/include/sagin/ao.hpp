// SPDX-License-Identifier: Apache-2.0
//
// Alternating optimization: water-filling on a fixed assignment, then greedy
// per-subcarrier reassignment on fixed per-subcarrier power, repeated until
// the assignment is a fixed point.

#pragma once

#include "sagin/model.hpp"
#include "sagin/trace.hpp"

#include <cstdint>
#include <vector>

namespace sagin {

inline constexpr double kAoRateTolerance = 1e-6;

struct AoResult
{
    Allocation allocation;
    RateReport rates;
    ConvergenceTrace trace;
    int iterations_used = 0;
    bool converged = false;
    // Set when the converged allocation missed a QoS target and was re-filled
    // with per-user floors. The trace covers the unconstrained alternation only.
    bool qos_adjusted = false;
};

// For every subcarrier picks the user with the highest rate under the given
// power; equivalently the highest received SNR p * h. Ties go to the lowest
// user index.
Matrix<int> greedyAssignment(const ChannelMatrix& h, const Matrix<double>& power);

// Requires K <= N. Deterministic in (h, config, seed, qos).
AoResult aoSolve(const ChannelMatrix& h, const SystemConfig& config, std::uint64_t seed,
                 const QosSpec& qos = QosSpec::none());

enum class UserClass { Responder, Civilian };

struct PriorityClass
{
    int user = 0;
    UserClass user_class = UserClass::Civilian;
    int slot = 0;
};

struct SlotResult
{
    int slot = 0;
    std::vector<int> users; // global user ids in this slot, ascending
    AoResult result;
};

struct PrioritySchedule
{
    std::vector<PriorityClass> membership;
    std::vector<SlotResult> slots;
};

// Time-slot scheduling for K > N. Responders fill slot 0; civilians are dealt
// round-robin over the following slots (or from slot 0 when there are no
// responders). n_slots == 0 picks the smallest feasible count. Every slot is
// solved independently with the full power budget.
PrioritySchedule aoPrioritySchedule(const ChannelMatrix& h, const std::vector<UserClass>& classes,
                                    const SystemConfig& config, std::uint64_t seed, int n_slots = 0,
                                    const QosSpec& qos = QosSpec::none());

} // namespace sagin
