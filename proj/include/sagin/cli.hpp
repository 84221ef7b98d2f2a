// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "sagin/config.hpp"
#include "sagin/io.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sagin {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInfeasible = 3;

// One solve on the channel of trial 0 for the configured seed, so the result
// matches the first trial of a campaign with the same seed.
Json solveReport(const RunConfig& config);

// Columns for plotting: iteration, mean sum rate in Mbps, active trials.
std::string plotData(const Json& summary_doc);

// args excludes the program name. Returns the process exit code.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace sagin
