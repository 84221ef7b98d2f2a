// SPDX-License-Identifier: Apache-2.0
//
// Water-filling power allocation over parallel interference-free links.

#pragma once

#include <span>
#include <vector>

namespace sagin {

// Absolute tolerance on the budget residual of the water-level bisection (watts).
inline constexpr double kWaterLevelTolerance = 1e-12;

struct WaterfillSolution
{
    std::vector<double> power;
    double water_level = 0.0;
};

// Maximizes sum log2(1 + p_i h_i / noise) subject to sum p_i = budget, p >= 0.
// p_i = max(0, mu - noise / h_i). Requires a nonempty set, h_i > 0 and budget > 0.
WaterfillSolution waterfill(std::span<const double> gains, double budget_w, double noise_power_w);

std::vector<double> waterfillPower(std::span<const double> gains, double budget_w, double noise_power_w);

// Same objective with per-link floors p_i >= floor_i. Links below the water
// level are clamped to their floor and the residual budget is re-filled over
// the rest until the clamped set is stable. Zero-gain links are allowed when
// their floor is zero. Throws InfeasibleError when sum(floors) > budget.
std::vector<double> waterfillWithFloors(std::span<const double> gains, std::span<const double> floors,
                                        double budget_w, double noise_power_w);

} // namespace sagin
