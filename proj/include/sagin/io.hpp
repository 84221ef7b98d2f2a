// SPDX-License-Identifier: Apache-2.0
//
// JSON and CSV encodings of solver results, campaign summaries and scenario
// worlds. Files always carry bits/s; Mbps appears only in human-facing output.

#pragma once

#include "sagin/montecarlo.hpp"
#include "sagin/scenario.hpp"

#include <json.hpp>

#include <iosfwd>
#include <span>

namespace sagin {

using Json = nlohmann::ordered_json;

Json summaryToJson(const McSummary& summary);
// Throws ConfigError when the document is not a summary.
McSummary summaryFromJson(const Json& doc);

// One row per recorded iteration: trial,iteration,sum_rate_bps.
void writeTraceCsv(std::ostream& out, std::span<const TrialRecord> trials);

Json constraintsToJson(const ConstraintReport& report);
Json stationToJson(const Station& station);
Json worldToJson(const World& world);
Json scheduleToJson(const UavSchedule& schedule);
Json coverageToJson(const CoverageReport& report);

// Shortest text that parses back to the same double.
std::string formatDouble(double value);

} // namespace sagin
