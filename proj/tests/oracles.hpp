// SPDX-License-Identifier: Apache-2.0
//
// Independent reference solutions used only by the tests. Nothing here calls
// into the library's solvers.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

inline double linkRate(double p, double h, double bandwidth, double noise)
{
    return bandwidth * std::log2(1.0 + p * h / noise);
}

// Textbook water-filling: try the m strongest links for m = K..1 and keep the
// first level that leaves every active link above its noise floor.
inline std::vector<double> waterfill(const std::vector<double>& gains, double budget, double noise)
{
    const std::size_t k = gains.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return gains[a] > gains[b]; });
    std::vector<double> p(k, 0.0);
    for (std::size_t m = k; m >= 1; --m) {
        double inv = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            inv += noise / gains[order[i]];
        }
        const double mu = (budget + inv) / static_cast<double>(m);
        if (mu > noise / gains[order[m - 1]]) {
            for (std::size_t i = 0; i < m; ++i) {
                p[order[i]] = mu - noise / gains[order[i]];
            }
            return p;
        }
    }
    return p;
}

// Floored water-filling by bisection on the water level.
inline std::vector<double> flooredWaterfill(const std::vector<double>& gains, const std::vector<double>& floors,
                                            double budget, double noise)
{
    auto fill = [&](double mu) {
        std::vector<double> p(gains.size());
        for (std::size_t i = 0; i < gains.size(); ++i) {
            const double level = gains[i] > 0.0 ? mu - noise / gains[i] : 0.0;
            p[i] = std::max(floors[i], level);
        }
        return p;
    };
    auto total = [&](double mu) {
        const auto p = fill(mu);
        return std::accumulate(p.begin(), p.end(), 0.0);
    };
    double lo = 0.0;
    double hi = budget;
    for (double g : gains) {
        if (g > 0.0) {
            hi = std::max(hi, budget + noise / g);
        }
    }
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        (total(mid) > budget ? hi : lo) = mid;
    }
    return fill(0.5 * (lo + hi));
}

inline double sumRate(const std::vector<double>& p, const std::vector<double>& h, double bandwidth, double noise)
{
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += linkRate(p[i], h[i], bandwidth, noise);
    }
    return s;
}

// Best sum rate over every one-to-one user -> subcarrier map of a square
// gain matrix (row-major, users by subcarriers), water-filled per map.
inline double bestPermutationRate(const std::vector<double>& gains, std::size_t n, double bandwidth, double budget,
                                  double noise)
{
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = -std::numeric_limits<double>::infinity();
    do {
        std::vector<double> h(n);
        for (std::size_t k = 0; k < n; ++k) {
            h[k] = gains[k * n + perm[k]];
        }
        best = std::max(best, sumRate(waterfill(h, budget, noise), h, bandwidth, noise));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Best sum rate over every subcarrier -> user map (users may hold several
// subcarriers), water-filled per map. users^subcarriers maps.
inline double bestAnyAssignmentRate(const std::vector<double>& gains, std::size_t users, std::size_t subcarriers,
                                    double bandwidth, double budget, double noise)
{
    std::vector<std::size_t> owner(subcarriers, 0);
    double best = -std::numeric_limits<double>::infinity();
    for (;;) {
        std::vector<double> h(subcarriers);
        for (std::size_t n = 0; n < subcarriers; ++n) {
            h[n] = gains[owner[n] * subcarriers + n];
        }
        best = std::max(best, sumRate(waterfill(h, budget, noise), h, bandwidth, noise));
        std::size_t i = 0;
        while (i < subcarriers && ++owner[i] == users) {
            owner[i++] = 0;
        }
        if (i == subcarriers) {
            return best;
        }
    }
}

} // namespace oracle
