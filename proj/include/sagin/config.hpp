// SPDX-License-Identifier: Apache-2.0
//
// Run configuration read from a TOML file. Every table is optional; missing
// keys keep the defaults below, unknown keys are rejected.

#pragma once

#include "sagin/montecarlo.hpp"
#include "sagin/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace sagin {

struct RunConfig
{
    SystemConfig system;
    ChannelModel channel;

    double ao_r_min_mbps = 0.0;
    int ao_responders = 0; // first users treated as responders when K > N

    double diwf_r_min_mbps = 0.1;
    double diwf_damping = 0.15;
    double diwf_tolerance = 1e-5;

    GaParams ga;
    double ga_r_min_mbps = 0.0;

    Algorithm algo = Algorithm::Ao;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string out_dir = "out";

    ScenarioParams scenario;

    // Throws ConfigError.
    void validate() const;
    CampaignSpec campaignSpec() const;
    DiwfParams diwfParams() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Throws ConfigError on syntax errors, wrong types, unknown keys or values
// failing validation.
RunConfig parseRunConfig(std::string_view text);
// Throws ConfigError naming the path when it cannot be read.
RunConfig loadRunConfig(const std::filesystem::path& path);
std::string serializeRunConfig(const RunConfig& config);

} // namespace sagin
