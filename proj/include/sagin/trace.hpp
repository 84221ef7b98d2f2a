// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace sagin {

// Sum rate (bits/s) recorded once per solver iteration or GA generation.
// A trace ends at the iteration where its run stopped; it is never padded.
struct ConvergenceTrace
{
    std::vector<double> sum_rate_bps;
    bool converged = false;

    std::size_t length() const noexcept { return sum_rate_bps.size(); }
    // 1-based iteration at which the run stopped (its length).
    std::size_t convergedAt() const noexcept { return sum_rate_bps.size(); }
    double final() const { return sum_rate_bps.empty() ? 0.0 : sum_rate_bps.back(); }

    friend bool operator==(const ConvergenceTrace&, const ConvergenceTrace&) = default;
};

} // namespace sagin
