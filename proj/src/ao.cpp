// SPDX-License-Identifier: Apache-2.0

#include "sagin/ao.hpp"

#include "sagin/diwf.hpp"
#include "sagin/errors.hpp"
#include "sagin/rng.hpp"
#include "sagin/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sagin {

namespace {

// owner[n] is the user holding subcarrier n, power[n] the watts on it.
struct SubcarrierPlan
{
    std::vector<int> owner;
    std::vector<double> power;
};

double planRate(const SubcarrierPlan& plan, const ChannelMatrix& h, const SystemConfig& config)
{
    double total = 0.0;
    for (std::size_t n = 0; n < plan.owner.size(); ++n) {
        if (plan.power[n] > 0.0) {
            total += linkRate(plan.power[n], h(static_cast<std::size_t>(plan.owner[n]), n), config.bandwidth_hz,
                              config.noise_power_w);
        }
    }
    return total;
}

std::vector<double> ownerGains(const SubcarrierPlan& plan, const ChannelMatrix& h)
{
    std::vector<double> g(plan.owner.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        g[n] = h(static_cast<std::size_t>(plan.owner[n]), n);
    }
    return g;
}

// Zero floors make this plain water-filling that tolerates dead subcarriers.
std::vector<double> fillPower(std::span<const double> gains, const SystemConfig& config)
{
    const std::vector<double> zero(gains.size(), 0.0);
    return waterfillWithFloors(gains, zero, config.power_budget_w, config.noise_power_w);
}

Allocation toAllocation(const SubcarrierPlan& plan, std::size_t users)
{
    Allocation alloc = Allocation::empty(users, plan.owner.size());
    for (std::size_t n = 0; n < plan.owner.size(); ++n) {
        const auto k = static_cast<std::size_t>(plan.owner[n]);
        alloc.assignment(k, n) = 1;
        alloc.power(k, n) = plan.power[n];
    }
    return alloc;
}

// Re-fills the converged assignment so every user reaches its minimum rate:
// starved users take their best subcarrier from a user holding several, then
// each user's floor sits on its strongest held subcarrier.
void enforceQos(SubcarrierPlan& plan, const ChannelMatrix& h, const SystemConfig& config, const QosSpec& qos)
{
    const auto k_users = h.users();
    const auto n_sub = h.subcarriers();
    std::vector<int> held(k_users, 0);
    for (int k : plan.owner) {
        ++held[static_cast<std::size_t>(k)];
    }
    for (std::size_t k = 0; k < k_users; ++k) {
        if (qos.minRate(k) <= 0.0 || held[k] > 0) {
            continue;
        }
        int pick = -1;
        for (std::size_t n = 0; n < n_sub; ++n) {
            if (held[static_cast<std::size_t>(plan.owner[n])] >= 2 &&
                (pick < 0 || h(k, n) > h(k, static_cast<std::size_t>(pick)))) {
                pick = static_cast<int>(n);
            }
        }
        if (pick < 0) {
            throw InfeasibleError("no subcarrier left for user " + std::to_string(k), {static_cast<int>(k)});
        }
        --held[static_cast<std::size_t>(plan.owner[static_cast<std::size_t>(pick)])];
        plan.owner[static_cast<std::size_t>(pick)] = static_cast<int>(k);
        held[k] = 1;
    }

    std::vector<int> best(k_users, -1);
    for (std::size_t n = 0; n < n_sub; ++n) {
        const auto k = static_cast<std::size_t>(plan.owner[n]);
        if (best[k] < 0 || h(k, n) > h(k, static_cast<std::size_t>(best[k]))) {
            best[k] = static_cast<int>(n);
        }
    }

    std::vector<double> best_gain(k_users, 0.0);
    std::vector<double> rmin(k_users, 0.0);
    for (std::size_t k = 0; k < k_users; ++k) {
        rmin[k] = qos.minRate(k);
        if (best[k] >= 0) {
            best_gain[k] = h(k, static_cast<std::size_t>(best[k]));
        }
    }
    const std::vector<double> user_floor = minPowerFloor(best_gain, rmin, config.bandwidth_hz, config.noise_power_w);
    const double floor_total = std::accumulate(user_floor.begin(), user_floor.end(), 0.0);
    if (floor_total > config.power_budget_w + kFeasibilityTolerance) {
        std::ostringstream msg;
        msg << "QoS infeasible: minimum power floors sum to " << floor_total << " W, above the "
            << config.power_budget_w << " W budget";
        throw InfeasibleError(msg.str(), bindingUsers(user_floor, config.power_budget_w));
    }

    std::vector<double> floors(n_sub, 0.0);
    for (std::size_t k = 0; k < k_users; ++k) {
        if (best[k] >= 0) {
            floors[static_cast<std::size_t>(best[k])] = user_floor[k];
        }
    }
    plan.power = waterfillWithFloors(ownerGains(plan, h), floors, config.power_budget_w, config.noise_power_w);
}

} // namespace

Matrix<int> greedyAssignment(const ChannelMatrix& h, const Matrix<double>& power)
{
    const auto k_users = h.users();
    const auto n_sub = h.subcarriers();
    if (!power.sameShape(k_users, n_sub)) {
        throw std::invalid_argument("power matrix shape does not match the channel matrix");
    }
    Matrix<int> assignment(k_users, n_sub, 0);
    if (k_users == 0) {
        return assignment;
    }
    for (std::size_t n = 0; n < n_sub; ++n) {
        std::size_t best = 0;
        double best_snr = power(0, n) * h(0, n);
        for (std::size_t k = 1; k < k_users; ++k) {
            const double snr = power(k, n) * h(k, n);
            if (snr > best_snr) {
                best = k;
                best_snr = snr;
            }
        }
        assignment(best, n) = 1;
    }
    return assignment;
}

AoResult aoSolve(const ChannelMatrix& h, const SystemConfig& config, std::uint64_t seed, const QosSpec& qos)
{
    config.validate();
    const auto k_users = h.users();
    const auto n_sub = h.subcarriers();
    if (k_users == 0 || n_sub == 0) {
        throw std::invalid_argument("empty channel matrix");
    }
    if (static_cast<int>(k_users) != config.n_users || static_cast<int>(n_sub) != config.n_subcarriers) {
        throw std::invalid_argument("channel matrix dimensions do not match the system configuration");
    }
    if (k_users > n_sub) {
        throw ConfigError("AO needs K <= N; use the priority time-slot schedule for more users than subcarriers");
    }
    if (!qos.min_rate_bps.empty() && qos.min_rate_bps.size() != k_users) {
        throw std::invalid_argument("QoS vector length does not match the number of users");
    }

    // Random start: a random injective user -> subcarrier map, leftover
    // subcarriers to random users, uniform power.
    auto rng = makeRng(seed);
    std::vector<int> perm(n_sub);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    SubcarrierPlan plan;
    plan.owner.assign(n_sub, 0);
    std::uniform_int_distribution<int> any_user(0, static_cast<int>(k_users) - 1);
    for (std::size_t i = 0; i < n_sub; ++i) {
        plan.owner[static_cast<std::size_t>(perm[i])] = i < k_users ? static_cast<int>(i) : any_user(rng);
    }
    const double uniform = config.power_budget_w / static_cast<double>(n_sub);
    plan.power.assign(n_sub, uniform);

    AoResult result;
    double previous = planRate(plan, h, config);
    Matrix<double> candidate(k_users, n_sub, 0.0);
    for (int it = 1; it <= config.max_iterations; ++it) {
        plan.power = fillPower(ownerGains(plan, h), config);

        // Power stays on the subcarrier; candidates are compared at that power.
        // A subcarrier left dry is ranked at the uniform share instead.
        for (std::size_t n = 0; n < n_sub; ++n) {
            const double p = plan.power[n] > 0.0 ? plan.power[n] : uniform;
            for (std::size_t k = 0; k < k_users; ++k) {
                candidate(k, n) = p;
            }
        }
        const Matrix<int> next = greedyAssignment(h, candidate);
        bool changed = false;
        for (std::size_t n = 0; n < n_sub; ++n) {
            for (std::size_t k = 0; k < k_users; ++k) {
                if (next(k, n) == 1) {
                    changed = changed || plan.owner[n] != static_cast<int>(k);
                    plan.owner[n] = static_cast<int>(k);
                }
            }
        }

        const double current = planRate(plan, h, config);
        result.trace.sum_rate_bps.push_back(current);
        result.iterations_used = it;
        const double scale = std::max(std::abs(previous), 1e-300);
        if (!changed && std::abs(current - previous) / scale < kAoRateTolerance) {
            result.converged = true;
            break;
        }
        previous = current;
    }
    result.trace.converged = result.converged;

    if (qos.active()) {
        const Allocation converged = toAllocation(plan, k_users);
        if (!checkConstraints(converged, h, config, qos).qosOk()) {
            enforceQos(plan, h, config, qos);
            result.qos_adjusted = true;
        }
    }

    result.allocation = toAllocation(plan, k_users);
    result.rates = rate(result.allocation, h, config);
    return result;
}

PrioritySchedule aoPrioritySchedule(const ChannelMatrix& h, const std::vector<UserClass>& classes,
                                    const SystemConfig& config, std::uint64_t seed, int n_slots, const QosSpec& qos)
{
    config.validate();
    if (classes.size() != h.users()) {
        throw std::invalid_argument("one priority class per channel row is required");
    }
    const int n_sub = static_cast<int>(h.subcarriers());
    std::vector<int> responders;
    std::vector<int> civilians;
    for (std::size_t k = 0; k < classes.size(); ++k) {
        (classes[k] == UserClass::Responder ? responders : civilians).push_back(static_cast<int>(k));
    }
    if (static_cast<int>(responders.size()) > n_sub) {
        throw InfeasibleError(std::to_string(responders.size()) + " responders exceed the " + std::to_string(n_sub) +
                                  " subcarriers of the first slot",
                              responders);
    }

    const int first_civilian_slot = responders.empty() ? 0 : 1;
    const int civilian_count = static_cast<int>(civilians.size());
    int civilian_slots = (civilian_count + n_sub - 1) / n_sub;
    if (n_slots > 0) {
        civilian_slots = n_slots - first_civilian_slot;
        if (civilian_count > 0 && (civilian_slots < 1 || civilian_count > civilian_slots * n_sub)) {
            throw InfeasibleError(std::to_string(n_slots) + " slots cannot hold " + std::to_string(civilian_count) +
                                  " civilians with " + std::to_string(n_sub) + " subcarriers per slot");
        }
    }
    const int total_slots = first_civilian_slot + std::max(civilian_slots, 0);
    if (total_slots == 0) {
        throw std::invalid_argument("no users to schedule");
    }

    PrioritySchedule schedule;
    schedule.slots.resize(static_cast<std::size_t>(total_slots));
    schedule.membership.resize(classes.size());
    for (int s = 0; s < total_slots; ++s) {
        schedule.slots[static_cast<std::size_t>(s)].slot = s;
    }
    for (int k : responders) {
        schedule.slots[0].users.push_back(k);
        schedule.membership[static_cast<std::size_t>(k)] = {k, UserClass::Responder, 0};
    }
    for (int i = 0; i < civilian_count; ++i) {
        const int k = civilians[static_cast<std::size_t>(i)];
        const int s = first_civilian_slot + i % civilian_slots;
        schedule.slots[static_cast<std::size_t>(s)].users.push_back(k);
        schedule.membership[static_cast<std::size_t>(k)] = {k, UserClass::Civilian, s};
    }

    for (auto& slot : schedule.slots) {
        if (slot.users.empty()) {
            continue;
        }
        SystemConfig slot_config = config;
        slot_config.n_users = static_cast<int>(slot.users.size());
        QosSpec slot_qos;
        if (!qos.min_rate_bps.empty()) {
            for (int k : slot.users) {
                slot_qos.min_rate_bps.push_back(qos.minRate(static_cast<std::size_t>(k)));
            }
        }
        const std::uint64_t slot_seed = slot.slot == 0 ? seed : deriveSeed(seed, static_cast<std::uint64_t>(slot.slot));
        slot.result = aoSolve(h.selectUsers(slot.users), slot_config, slot_seed, slot_qos);
    }
    return schedule;
}

} // namespace sagin
