// SPDX-License-Identifier: Apache-2.0

#include "sagin/diwf.hpp"

#include "sagin/errors.hpp"
#include "sagin/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sagin {

namespace {

double sumRate(std::span<const double> power, std::span<const double> gains, const SystemConfig& config,
               std::vector<double>* per_user = nullptr)
{
    double total = 0.0;
    for (std::size_t k = 0; k < power.size(); ++k) {
        const double r = power[k] > 0.0 ? linkRate(power[k], gains[k], config.bandwidth_hz, config.noise_power_w) : 0.0;
        if (per_user != nullptr) {
            (*per_user)[k] = r;
        }
        total += r;
    }
    return total;
}

} // namespace

double DiwfParams::minRate(std::size_t k) const
{
    if (min_rate_bps.empty()) {
        return 0.0;
    }
    return min_rate_bps.size() == 1 ? min_rate_bps.front() : min_rate_bps.at(k);
}

void DiwfParams::validate(std::size_t users) const
{
    if (!(damping > 0.0 && damping <= 1.0)) {
        throw ConfigError("damping must lie in (0, 1]");
    }
    if (!(tolerance > 0.0)) {
        throw ConfigError("tolerance must be positive");
    }
    if (min_rate_bps.size() > 1 && min_rate_bps.size() != users) {
        throw ConfigError("minimum-rate vector must have one entry per user or a single scalar");
    }
    for (double r : min_rate_bps) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
            throw ConfigError("minimum rates must be finite and nonnegative");
        }
    }
}

std::vector<double> minPowerFloor(std::span<const double> gains, std::span<const double> min_rate_bps,
                                  double bandwidth_hz, double noise_power_w)
{
    if (gains.size() != min_rate_bps.size()) {
        throw std::invalid_argument("gain and minimum-rate vectors differ in length");
    }
    std::vector<double> floors(gains.size(), 0.0);
    std::vector<int> dead;
    for (std::size_t k = 0; k < gains.size(); ++k) {
        if (min_rate_bps[k] <= 0.0) {
            continue;
        }
        if (!(gains[k] > 0.0)) {
            dead.push_back(static_cast<int>(k));
            continue;
        }
        const double gamma_min = std::exp2(min_rate_bps[k] / bandwidth_hz) - 1.0;
        floors[k] = gamma_min * noise_power_w / gains[k];
    }
    if (!dead.empty()) {
        std::ostringstream msg;
        msg << "users with zero channel gain cannot meet their minimum rate:";
        for (int k : dead) {
            msg << ' ' << k;
        }
        throw InfeasibleError(msg.str(), dead);
    }
    return floors;
}

std::vector<int> bindingUsers(std::span<const double> floors, double budget_w)
{
    std::vector<int> order(floors.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return floors[a] > floors[b]; });
    std::vector<int> out;
    double total = 0.0;
    for (int k : order) {
        if (floors[k] <= 0.0) {
            break;
        }
        out.push_back(k);
        total += floors[k];
        if (total > budget_w) {
            break;
        }
    }
    return out;
}

std::vector<int> diwfPreassign(const ChannelMatrix& h)
{
    const auto k_users = h.users();
    const auto n_sub = h.subcarriers();
    if (k_users > n_sub) {
        throw ConfigError("one-to-one preassignment needs K <= N");
    }
    std::vector<double> best(k_users, 0.0);
    for (std::size_t k = 0; k < k_users; ++k) {
        const auto row = h.gains().row(k);
        best[k] = *std::max_element(row.begin(), row.end());
    }
    std::vector<int> order(k_users);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return best[a] > best[b]; });

    std::vector<char> claimed(n_sub, 0);
    std::vector<int> subcarrier(k_users, -1);
    for (int k : order) {
        int pick = -1;
        for (std::size_t n = 0; n < n_sub; ++n) {
            if (!claimed[n] && (pick < 0 || h(k, n) > h(k, static_cast<std::size_t>(pick)))) {
                pick = static_cast<int>(n);
            }
        }
        claimed[static_cast<std::size_t>(pick)] = 1;
        subcarrier[static_cast<std::size_t>(k)] = pick;
    }
    return subcarrier;
}

std::vector<double> assignedGains(const ChannelMatrix& h, std::span<const int> subcarrier_of_user)
{
    std::vector<double> g(subcarrier_of_user.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        g[k] = h(k, static_cast<std::size_t>(subcarrier_of_user[k]));
    }
    return g;
}

DiwfResult diwfSolve(std::span<const double> gains, const SystemConfig& config, const DiwfParams& params)
{
    config.validate();
    const std::size_t k_users = gains.size();
    if (k_users == 0) {
        throw std::invalid_argument("DIWF needs at least one user");
    }
    params.validate(k_users);

    std::vector<double> rmin(k_users);
    for (std::size_t k = 0; k < k_users; ++k) {
        rmin[k] = params.minRate(k);
    }

    DiwfResult result;
    result.min_power = minPowerFloor(gains, rmin, config.bandwidth_hz, config.noise_power_w);
    const double floor_total = std::accumulate(result.min_power.begin(), result.min_power.end(), 0.0);
    const double budget = config.power_budget_w;
    if (floor_total > budget + kFeasibilityTolerance) {
        std::ostringstream msg;
        msg << "infeasible: minimum power floors sum to " << floor_total << " W, above the " << budget
            << " W budget";
        throw InfeasibleError(msg.str(), bindingUsers(result.min_power, budget));
    }

    // Floored water-filling target; independent of the current iterate since
    // the links are interference-free.
    const std::vector<double> target = waterfillWithFloors(gains, result.min_power, budget, config.noise_power_w);

    // Feasible start: floors plus an equal share of what remains.
    std::vector<double> power(k_users);
    const double share = (budget - floor_total) / static_cast<double>(k_users);
    for (std::size_t k = 0; k < k_users; ++k) {
        power[k] = result.min_power[k] + share;
    }

    const double alpha = params.damping;
    double previous = sumRate(power, gains, config);
    for (int it = 1; it <= config.max_iterations; ++it) {
        for (std::size_t k = 0; k < k_users; ++k) {
            power[k] = std::max((1.0 - alpha) * power[k] + alpha * target[k], result.min_power[k]);
        }
        const double current = sumRate(power, gains, config);
        result.trace.sum_rate_bps.push_back(current);
        result.iterates.push_back(power);
        const double scale = std::max(std::abs(previous), 1e-300);
        if (std::abs(current - previous) / scale < params.tolerance) {
            result.converged = true;
            break;
        }
        previous = current;
    }

    result.trace.converged = result.converged;
    result.rate_bps.assign(k_users, 0.0);
    sumRate(power, gains, config, &result.rate_bps);
    result.power = std::move(power);
    return result;
}

} // namespace sagin
