// SPDX-License-Identifier: Apache-2.0

#include "sagin/model.hpp"

#include "sagin/errors.hpp"
#include "sagin/rng.hpp"

#include <cmath>
#include <random>

namespace sagin {

namespace {

void requireShape(const Allocation& alloc, const ChannelMatrix& h)
{
    const auto k = h.users();
    const auto n = h.subcarriers();
    if (!alloc.assignment.sameShape(k, n) || !alloc.power.sameShape(k, n)) {
        throw std::invalid_argument("allocation shape does not match the " + std::to_string(k) + "x" +
                                    std::to_string(n) + " channel matrix");
    }
}

} // namespace

void SystemConfig::validate() const
{
    if (n_subcarriers < 1) {
        throw ConfigError("n_subcarriers must be >= 1");
    }
    if (n_users < 1) {
        throw ConfigError("n_users must be >= 1");
    }
    if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz)) {
        throw ConfigError("bandwidth_hz must be positive");
    }
    if (!(noise_power_w > 0.0) || !std::isfinite(noise_power_w)) {
        throw ConfigError("noise_power_w must be positive");
    }
    if (!(power_budget_w > 0.0) || !std::isfinite(power_budget_w)) {
        throw ConfigError("power_budget_w must be positive");
    }
    if (max_iterations < 1) {
        throw ConfigError("max_iterations must be >= 1");
    }
    if (mc_runs < 1) {
        throw ConfigError("mc_runs must be >= 1");
    }
}

ChannelMatrix::ChannelMatrix(Matrix<double> gains) : gains_(std::move(gains))
{
    for (double g : gains_.values()) {
        if (!std::isfinite(g) || g < 0.0) {
            throw ConfigError("channel gains must be finite and nonnegative");
        }
    }
}

ChannelMatrix ChannelMatrix::selectUsers(const std::vector<int>& users) const
{
    Matrix<double> out(users.size(), subcarriers());
    for (std::size_t i = 0; i < users.size(); ++i) {
        const auto src = gains_.row(static_cast<std::size_t>(users[i]));
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return ChannelMatrix(std::move(out));
}

ChannelModel::Kind parseChannelModelKind(std::string_view name)
{
    if (name == "unit-exp") {
        return ChannelModel::Kind::UnitExponential;
    }
    if (name == "constant") {
        return ChannelModel::Kind::Constant;
    }
    if (name == "path-loss") {
        return ChannelModel::Kind::PathLoss;
    }
    throw ConfigError("unknown channel model '" + std::string(name) + "'");
}

std::string channelModelName(ChannelModel::Kind kind)
{
    switch (kind) {
    case ChannelModel::Kind::UnitExponential:
        return "unit-exp";
    case ChannelModel::Kind::Constant:
        return "constant";
    case ChannelModel::Kind::PathLoss:
        return "path-loss";
    }
    return "unknown";
}

ChannelMatrix sampleChannel(std::uint64_t seed, const SystemConfig& config, const ChannelModel& model)
{
    config.validate();
    const auto k_users = static_cast<std::size_t>(config.n_users);
    const auto n_sub = static_cast<std::size_t>(config.n_subcarriers);
    Matrix<double> gains(k_users, n_sub);
    auto rng = makeRng(seed);
    std::exponential_distribution<double> fading(1.0);

    switch (model.kind) {
    case ChannelModel::Kind::UnitExponential:
        for (double& g : gains.values()) {
            g = fading(rng);
        }
        break;
    case ChannelModel::Kind::Constant:
        if (!(model.constant_gain >= 0.0) || !std::isfinite(model.constant_gain)) {
            throw ConfigError("constant channel gain must be finite and nonnegative");
        }
        for (double& g : gains.values()) {
            g = model.constant_gain;
        }
        break;
    case ChannelModel::Kind::PathLoss: {
        if (!(model.altitude_m > 0.0) || !(model.radius_m >= 0.0) || !(model.exponent > 0.0) ||
            !(model.reference_gain > 0.0)) {
            throw ConfigError("path-loss model needs altitude > 0, radius >= 0, exponent > 0, reference gain > 0");
        }
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t k = 0; k < k_users; ++k) {
            // uniform in the disc: radius ~ R * sqrt(U)
            const double ground = model.radius_m * std::sqrt(unit(rng));
            const double d = std::hypot(ground, model.altitude_m);
            const double mean_gain = model.reference_gain * std::pow(d, -model.exponent);
            for (double& g : gains.row(k)) {
                g = mean_gain * fading(rng);
            }
        }
        break;
    }
    }
    return ChannelMatrix(std::move(gains));
}

bool QosSpec::active() const
{
    for (double r : min_rate_bps) {
        if (r > 0.0) {
            return true;
        }
    }
    return false;
}

double linkRate(double power_w, double gain, double bandwidth_hz, double noise_power_w)
{
    return bandwidth_hz * std::log2(1.0 + power_w * gain / noise_power_w);
}

Matrix<double> sinr(const Allocation& alloc, const ChannelMatrix& h, double noise_power_w)
{
    requireShape(alloc, h);
    if (!(noise_power_w > 0.0)) {
        throw std::invalid_argument("noise power must be positive");
    }
    const auto k_users = h.users();
    const auto n_sub = h.subcarriers();
    Matrix<double> gamma(k_users, n_sub, 0.0);

    for (std::size_t n = 0; n < n_sub; ++n) {
        // Received power of every scheduled user on this subcarrier.
        double total = 0.0;
        int contributors = 0;
        std::size_t sole = 0;
        for (std::size_t k = 0; k < k_users; ++k) {
            const double term = alloc.assignment(k, n) * alloc.power(k, n) * h(k, n);
            if (term != 0.0) {
                total += term;
                ++contributors;
                sole = k;
            }
        }
        for (std::size_t k = 0; k < k_users; ++k) {
            const double signal = alloc.power(k, n) * h(k, n);
            if (signal == 0.0) {
                continue;
            }
            double interference = 0.0;
            if (contributors > 1) {
                interference = total - alloc.assignment(k, n) * signal;
            } else if (contributors == 1 && sole != k) {
                interference = total;
            }
            gamma(k, n) = signal / (interference + noise_power_w);
        }
    }
    return gamma;
}

RateReport rate(const Allocation& alloc, const ChannelMatrix& h, const SystemConfig& config)
{
    const Matrix<double> gamma = sinr(alloc, h, config.noise_power_w);
    RateReport report;
    report.rate = Matrix<double>(gamma.rows(), gamma.cols(), 0.0);
    report.per_user.assign(gamma.rows(), 0.0);
    for (std::size_t k = 0; k < gamma.rows(); ++k) {
        double user_total = 0.0;
        for (std::size_t n = 0; n < gamma.cols(); ++n) {
            const double g = gamma(k, n);
            if (g > 0.0) {
                report.rate(k, n) = config.bandwidth_hz * std::log2(1.0 + g);
            }
            user_total += alloc.assignment(k, n) * report.rate(k, n);
        }
        report.per_user[k] = user_total;
        report.sum_rate += user_total;
    }
    return report;
}

ConstraintReport checkConstraints(const Allocation& alloc, const ChannelMatrix& h, const SystemConfig& config,
                                  const QosSpec& qos)
{
    ConstraintReport report;
    report.rates = rate(alloc, h, config);
    const auto k_users = h.users();
    const auto n_sub = h.subcarriers();
    if (!qos.min_rate_bps.empty() && qos.min_rate_bps.size() != k_users) {
        throw std::invalid_argument("QoS vector length does not match the number of users");
    }

    for (std::size_t n = 0; n < n_sub; ++n) {
        int column = 0;
        for (std::size_t k = 0; k < k_users; ++k) {
            const int a = alloc.assignment(k, n);
            const double p = alloc.power(k, n);
            if (a != 0 && a != 1) {
                ++report.non_binary_entries;
            }
            if (a == 0 && p > 0.0) {
                ++report.stray_power_entries;
            }
            column += a;
            report.total_power += a * p;
        }
        if (column > 1) {
            report.exclusivity_excess += column - 1;
        }
    }
    report.power_overshoot = std::max(0.0, report.total_power - config.power_budget_w);

    report.rate_shortfall.assign(k_users, 0.0);
    for (std::size_t k = 0; k < k_users; ++k) {
        const double gap = qos.minRate(k) - report.rates.per_user[k];
        if (gap > 0.0) {
            report.rate_shortfall[k] = gap;
            report.total_shortfall += gap;
        }
    }
    return report;
}

} // namespace sagin
