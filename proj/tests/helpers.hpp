// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "sagin/model.hpp"

#include <initializer_list>
#include <vector>

namespace testing {

inline sagin::ChannelMatrix channel(std::initializer_list<std::initializer_list<double>> rows)
{
    const std::size_t r = rows.size();
    const std::size_t c = rows.begin()->size();
    sagin::Matrix<double> m(r, c);
    std::size_t k = 0;
    for (const auto& row : rows) {
        std::size_t n = 0;
        for (double v : row) {
            m(k, n++) = v;
        }
        ++k;
    }
    return sagin::ChannelMatrix(std::move(m));
}

inline sagin::SystemConfig smallConfig(int users, int subcarriers, double noise = 1.0, double budget = 1.0,
                                       double bandwidth = 1.0)
{
    sagin::SystemConfig c;
    c.n_users = users;
    c.n_subcarriers = subcarriers;
    c.noise_power_w = noise;
    c.power_budget_w = budget;
    c.bandwidth_hz = bandwidth;
    return c;
}

inline std::vector<double> rowMajor(const sagin::ChannelMatrix& h)
{
    const auto v = h.gains().values();
    return {v.begin(), v.end()};
}

} // namespace testing
