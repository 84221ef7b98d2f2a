// SPDX-License-Identifier: Apache-2.0
//
// Shared domain types for downlink OFDMA allocation at a single aerial base
// station: system dimensions, channel gains, the paired assignment/power
// matrices, and the rate and constraint evaluations every solver relies on.
//
// Units: rates in bits/s, powers in watts, bandwidth in Hz. Channel gains are
// dimensionless power gains.

#pragma once

#include "sagin/matrix.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sagin {

// Slack allowed on power-budget comparisons (watts).
inline constexpr double kFeasibilityTolerance = 1e-9;

struct SystemConfig
{
    int n_subcarriers = 12;
    int n_users = 12;
    double bandwidth_hz = 100e3;
    double noise_power_w = 1e-9;
    double power_budget_w = 20.0;
    int max_iterations = 100;
    int mc_runs = 10000;

    // Throws ConfigError on the first violated invariant.
    void validate() const;

    friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

class ChannelMatrix
{
  public:
    ChannelMatrix() = default;
    // Throws ConfigError unless every gain is finite and nonnegative.
    explicit ChannelMatrix(Matrix<double> gains);

    std::size_t users() const noexcept { return gains_.rows(); }
    std::size_t subcarriers() const noexcept { return gains_.cols(); }
    double operator()(std::size_t k, std::size_t n) const { return gains_(k, n); }
    const Matrix<double>& gains() const noexcept { return gains_; }

    // Sub-matrix with the given user rows, in order.
    ChannelMatrix selectUsers(const std::vector<int>& users) const;

    friend bool operator==(const ChannelMatrix&, const ChannelMatrix&) = default;

  private:
    Matrix<double> gains_;
};

struct ChannelModel
{
    enum class Kind { UnitExponential, Constant, PathLoss };

    Kind kind = Kind::UnitExponential;
    // Constant: every gain equals this value.
    double constant_gain = 1.0;
    // PathLoss: users uniform in a disc under the hovering station;
    // h = reference_gain * d^-exponent * Exp(1) with d the 3D distance in meters.
    double altitude_m = 100.0;
    double radius_m = 500.0;
    double exponent = 2.0;
    double reference_gain = 1e4;

    static ChannelModel unitExponential() { return {}; }
    static ChannelModel constant(double gain)
    {
        ChannelModel m;
        m.kind = Kind::Constant;
        m.constant_gain = gain;
        return m;
    }

    friend bool operator==(const ChannelModel&, const ChannelModel&) = default;
};

// Accepts "unit-exp", "constant" and "path-loss". Throws ConfigError otherwise.
ChannelModel::Kind parseChannelModelKind(std::string_view name);
std::string channelModelName(ChannelModel::Kind kind);

// Deterministic for a fixed seed.
ChannelMatrix sampleChannel(std::uint64_t seed, const SystemConfig& config, const ChannelModel& model);

struct Allocation
{
    Matrix<int> assignment;
    Matrix<double> power;

    static Allocation empty(std::size_t users, std::size_t subcarriers)
    {
        return {Matrix<int>(users, subcarriers, 0), Matrix<double>(users, subcarriers, 0.0)};
    }

    friend bool operator==(const Allocation&, const Allocation&) = default;
};

struct QosSpec
{
    // Per-user minimum rate in bits/s. Empty means no requirement.
    std::vector<double> min_rate_bps;

    static QosSpec none() { return {}; }
    static QosSpec uniform(std::size_t users, double rate_bps) { return {std::vector<double>(users, rate_bps)}; }

    bool active() const;
    double minRate(std::size_t k) const { return min_rate_bps.empty() ? 0.0 : min_rate_bps.at(k); }
};

struct RateReport
{
    Matrix<double> rate;          // r_{k,n}
    std::vector<double> per_user; // row sums of a .* r
    double sum_rate = 0.0;
};

struct ConstraintReport
{
    int non_binary_entries = 0;
    int exclusivity_excess = 0;  // sum over subcarriers of max(0, column sum - 1)
    int stray_power_entries = 0; // p > 0 where a == 0
    double total_power = 0.0;    // sum of a .* p
    double power_overshoot = 0.0; // max(0, total - budget)
    std::vector<double> rate_shortfall; // per user, bits/s
    double total_shortfall = 0.0;
    RateReport rates;

    bool binaryOk() const { return non_binary_entries == 0; }
    bool exclusivityOk() const { return exclusivity_excess == 0; }
    bool powerOk() const { return power_overshoot <= kFeasibilityTolerance; }
    bool qosOk() const { return total_shortfall <= 0.0; }
    bool feasible() const { return binaryOk() && exclusivityOk() && powerOk() && qosOk(); }
};

Matrix<double> sinr(const Allocation& alloc, const ChannelMatrix& h, double noise_power_w);

RateReport rate(const Allocation& alloc, const ChannelMatrix& h, const SystemConfig& config);

// Violations are returned as data; only malformed inputs throw.
ConstraintReport checkConstraints(const Allocation& alloc, const ChannelMatrix& h, const SystemConfig& config,
                                  const QosSpec& qos);

// Shannon rate of a single link.
double linkRate(double power_w, double gain, double bandwidth_hz, double noise_power_w);

} // namespace sagin
