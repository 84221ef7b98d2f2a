// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sagin {

// Invalid parameters or unsupported shapes. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

// A QoS or power requirement that cannot be met. Maps to CLI exit code 3.
class InfeasibleError : public std::runtime_error
{
  public:
    InfeasibleError(const std::string& what, std::vector<int> users = {})
        : std::runtime_error(what), users_(std::move(users))
    {
    }

    // Users whose requirements make the instance infeasible (0-based).
    const std::vector<int>& users() const noexcept { return users_; }

  private:
    std::vector<int> users_;
};

} // namespace sagin
