// SPDX-License-Identifier: Apache-2.0

#include "sagin/waterfill.hpp"

#include "sagin/errors.hpp"
#include "sagin/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace sagin {

namespace {

// Water level search tolerating zero gains (those links never fill).
WaterfillSolution fillLevel(std::span<const double> gains, double budget_w, double noise_power_w)
{
    const std::size_t n = gains.size();
    WaterfillSolution out;
    out.power.assign(n, 0.0);

    std::vector<double> floor_level(n, std::numeric_limits<double>::infinity());
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (gains[i] > 0.0) {
            floor_level[i] = noise_power_w / gains[i];
            lowest = std::min(lowest, floor_level[i]);
        }
    }
    if (!std::isfinite(lowest) || budget_w <= 0.0) {
        out.water_level = std::isfinite(lowest) ? lowest : 0.0;
        return out;
    }

    auto filled = [&](double level) {
        double total = 0.0;
        for (double f : floor_level) {
            if (level > f) {
                total += level - f;
            }
        }
        return total;
    };

    // The strongest link alone absorbs the whole budget at lowest + budget.
    double lo = lowest;
    double hi = lowest + budget_w;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double total = filled(mid);
        if (std::abs(total - budget_w) <= kWaterLevelTolerance) {
            lo = hi = mid;
            break;
        }
        (total < budget_w ? lo : hi) = mid;
        if (hi - lo <= std::numeric_limits<double>::epsilon() * hi) {
            break;
        }
    }

    // Closed-form level on the active set found by the bisection.
    double level = 0.5 * (lo + hi);
    double inverse_sum = 0.0;
    int active = 0;
    for (double f : floor_level) {
        if (level > f) {
            inverse_sum += f;
            ++active;
        }
    }
    if (active > 0) {
        const double exact = (budget_w + inverse_sum) / active;
        if (std::abs(filled(exact) - budget_w) <= std::abs(filled(level) - budget_w)) {
            level = exact;
        }
    }

    out.water_level = level;
    for (std::size_t i = 0; i < n; ++i) {
        out.power[i] = std::max(0.0, level - floor_level[i]);
    }
    return out;
}

} // namespace

WaterfillSolution waterfill(std::span<const double> gains, double budget_w, double noise_power_w)
{
    if (gains.empty()) {
        throw std::invalid_argument("water-filling needs at least one assigned link");
    }
    if (!(budget_w > 0.0)) {
        throw std::invalid_argument("water-filling budget must be positive");
    }
    if (!(noise_power_w > 0.0)) {
        throw std::invalid_argument("noise power must be positive");
    }
    for (double g : gains) {
        if (!(g > 0.0) || !std::isfinite(g)) {
            throw std::invalid_argument("water-filling needs strictly positive finite gains");
        }
    }
    return fillLevel(gains, budget_w, noise_power_w);
}

std::vector<double> waterfillPower(std::span<const double> gains, double budget_w, double noise_power_w)
{
    return waterfill(gains, budget_w, noise_power_w).power;
}

std::vector<double> waterfillWithFloors(std::span<const double> gains, std::span<const double> floors,
                                        double budget_w, double noise_power_w)
{
    const std::size_t n = gains.size();
    if (floors.size() != n) {
        throw std::invalid_argument("floor vector length does not match the gain vector");
    }
    if (n == 0) {
        throw std::invalid_argument("water-filling needs at least one assigned link");
    }
    if (!(noise_power_w > 0.0)) {
        throw std::invalid_argument("noise power must be positive");
    }
    const double floor_total = std::accumulate(floors.begin(), floors.end(), 0.0);
    if (floor_total > budget_w + kFeasibilityTolerance) {
        std::ostringstream msg;
        msg << "minimum power floors sum to " << floor_total << " W, above the " << budget_w << " W budget";
        throw InfeasibleError(msg.str());
    }

    std::vector<char> clamped(n, 0);
    std::vector<double> power(n, 0.0);
    for (;;) {
        double residual = budget_w;
        std::vector<double> free_gains;
        std::vector<std::size_t> free_index;
        for (std::size_t i = 0; i < n; ++i) {
            if (clamped[i]) {
                residual -= floors[i];
            } else {
                free_gains.push_back(gains[i]);
                free_index.push_back(i);
            }
        }
        if (free_index.empty()) {
            for (std::size_t i = 0; i < n; ++i) {
                power[i] = floors[i];
            }
            break;
        }
        const auto fill = fillLevel(free_gains, std::max(0.0, residual), noise_power_w);

        bool changed = false;
        for (std::size_t j = 0; j < free_index.size(); ++j) {
            const std::size_t i = free_index[j];
            if (fill.power[j] < floors[i]) {
                clamped[i] = 1;
                changed = true;
            }
        }
        if (!changed) {
            for (std::size_t i = 0; i < n; ++i) {
                power[i] = clamped[i] ? floors[i] : 0.0;
            }
            for (std::size_t j = 0; j < free_index.size(); ++j) {
                power[free_index[j]] = fill.power[j];
            }
            break;
        }
    }
    return power;
}

} // namespace sagin
