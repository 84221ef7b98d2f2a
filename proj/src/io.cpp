// SPDX-License-Identifier: Apache-2.0

#include "sagin/io.hpp"

#include "sagin/errors.hpp"

#include <charconv>
#include <ostream>

namespace sagin {

namespace {

std::string kindName(StationKind kind) { return kind == StationKind::Tbs ? "tbs" : "abs"; }

Json pointToJson(const Point& p) { return Json::array({p.x, p.y, p.z}); }

} // namespace

std::string formatDouble(double value)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

Json summaryToJson(const McSummary& summary)
{
    Json doc;
    doc["n_trials"] = summary.n_trials;
    doc["n_infeasible"] = summary.n_infeasible;
    doc["n_not_converged"] = summary.n_not_converged;
    Json iters = Json::array();
    for (const auto& it : summary.per_iteration) {
        iters.push_back({{"iter", it.iteration},
                         {"mean_bps", it.mean_bps},
                         {"mean_mbps", it.mean_bps / 1e6},
                         {"active", it.active}});
    }
    doc["per_iteration"] = std::move(iters);
    Json hist = Json::object();
    for (const auto& [length, count] : summary.histogram) {
        hist[std::to_string(length)] = count;
    }
    doc["histogram"] = std::move(hist);
    doc["final"] = {{"mean_bps", summary.final_mean_bps},
                    {"max_bps", summary.final_max_bps},
                    {"min_bps", summary.final_min_bps},
                    {"mean_mbps", summary.final_mean_bps / 1e6},
                    {"max_mbps", summary.final_max_bps / 1e6}};
    return doc;
}

McSummary summaryFromJson(const Json& doc)
{
    try {
        McSummary s;
        s.n_trials = doc.at("n_trials").get<std::size_t>();
        s.n_infeasible = doc.value("n_infeasible", std::size_t{0});
        s.n_not_converged = doc.value("n_not_converged", std::size_t{0});
        for (const auto& it : doc.at("per_iteration")) {
            s.per_iteration.push_back({it.at("iter").get<std::size_t>(), it.at("mean_bps").get<double>(),
                                       it.at("active").get<std::size_t>()});
        }
        for (const auto& [key, count] : doc.at("histogram").items()) {
            s.histogram[std::stoul(key)] = count.get<std::size_t>();
        }
        const Json& fin = doc.at("final");
        s.final_mean_bps = fin.at("mean_bps").get<double>();
        s.final_max_bps = fin.at("max_bps").get<double>();
        s.final_min_bps = fin.at("min_bps").get<double>();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed summary: ") + e.what());
    } catch (const std::logic_error& e) {
        throw ConfigError(std::string("malformed summary: ") + e.what());
    }
}

void writeTraceCsv(std::ostream& out, std::span<const TrialRecord> trials)
{
    out << "trial,iteration,sum_rate_bps\n";
    for (const auto& t : trials) {
        for (std::size_t i = 0; i < t.trace.length(); ++i) {
            out << t.trial << ',' << i + 1 << ',' << formatDouble(t.trace.sum_rate_bps[i]) << '\n';
        }
    }
}

Json constraintsToJson(const ConstraintReport& report)
{
    return {{"binary", report.binaryOk()},
            {"exclusive", report.exclusivityOk()},
            {"power_ok", report.powerOk()},
            {"qos_ok", report.qosOk()},
            {"feasible", report.feasible()},
            {"total_power_w", report.total_power},
            {"power_overshoot_w", report.power_overshoot},
            {"total_shortfall_mbps", report.total_shortfall / 1e6}};
}

Json stationToJson(const Station& s)
{
    return {{"id", s.id},
            {"kind", kindName(s.kind)},
            {"position_m", pointToJson(s.position)},
            {"tx_power_w", s.tx_power_w},
            {"capacity", s.capacity},
            {"operational", s.operational},
            {"coverage_radius_m", s.coverage_radius_m},
            {"cluster", s.cluster},
            {"rotating", s.rotating}};
}

Json worldToJson(const World& world)
{
    Json doc;
    doc["policy"] = associationPolicyName(world.policy);
    doc["cell_radius_m"] = world.grid.cell_radius_m;
    Json cells = Json::array();
    for (const auto& c : world.grid.cells) {
        cells.push_back({{"id", c.id}, {"cluster", c.cluster}, {"center_m", pointToJson(c.center)}});
    }
    doc["cells"] = std::move(cells);
    Json stations = Json::array();
    for (const auto& s : world.stations) {
        stations.push_back(stationToJson(s));
    }
    doc["stations"] = std::move(stations);
    Json users = Json::array();
    for (std::size_t u = 0; u < world.users.size(); ++u) {
        const auto& user = world.users[u];
        Json j = {{"id", user.id},
                  {"position_m", pointToJson(user.position)},
                  {"priority", user.priority == UserClass::Responder ? "responder" : "civilian"},
                  {"latency", user.latency == LatencyClass::Tight ? "tight" : "relaxed"}};
        if (world.association_current) {
            j["station"] = world.association[u] == kUncovered ? Json(nullptr) : Json(world.association[u]);
        }
        users.push_back(std::move(j));
    }
    doc["users"] = std::move(users);
    return doc;
}

Json scheduleToJson(const UavSchedule& s)
{
    Json phases = Json::array();
    for (const auto& p : s.phases) {
        phases.push_back({{"active_sector", p.active_sector}, {"cluster_of_uav", p.cluster_of_uav}});
    }
    return {{"n_uavs", s.n_uavs},
            {"dwell_s", s.dwell_s},
            {"total_phases", s.totalPhases()},
            {"sector_of_cluster", s.sector_of_cluster},
            {"sweep_order", s.sweep_order},
            {"phases", std::move(phases)},
            {"allocations", s.allocations},
            {"duty_cycle", s.duty_cycle},
            {"worst_wait_s", s.worst_wait_s}};
}

Json coverageToJson(const CoverageReport& r)
{
    Json clusters = Json::array();
    for (const auto& c : r.clusters) {
        clusters.push_back({{"cluster", c.cluster},
                            {"users", c.users},
                            {"covered", c.covered},
                            {"uncovered", c.uncovered},
                            {"covered_fraction", c.covered_fraction},
                            {"mean_wait_s", c.mean_wait_s},
                            {"max_wait_s", c.max_wait_s}});
    }
    return {{"total_users", r.total_users},
            {"total_uncovered", r.total_uncovered},
            {"failed_stations", r.failed_stations},
            {"offloaded_users", r.offloaded_users},
            {"station_load", r.station_load},
            {"clusters", std::move(clusters)}};
}

} // namespace sagin
