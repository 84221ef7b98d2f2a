// SPDX-License-Identifier: Apache-2.0

#include "sagin/scenario.hpp"

#include "sagin/errors.hpp"
#include "sagin/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace sagin {

namespace {

// Axial hex coordinates; unit neighbour offset along +x.
struct Axial
{
    int q = 0;
    int r = 0;
};

Axial rotate60(Axial a) { return {-a.r, a.q + a.r}; }

Point toCartesian(Axial a, double pitch)
{
    return {pitch * (a.q + 0.5 * a.r), pitch * (std::numbers::sqrt3 / 2.0) * a.r, 0.0};
}

std::vector<Axial> flower(Axial spoke)
{
    std::vector<Axial> out{{0, 0}};
    for (int i = 0; i < 6; ++i) {
        out.push_back(spoke);
        spoke = rotate60(spoke);
    }
    return out;
}

int sectorOf(const Point& p)
{
    if (std::hypot(p.x, p.y) < 1e-9) {
        return -1;
    }
    double deg = std::atan2(p.y, p.x) * 180.0 / std::numbers::pi;
    if (deg < 0.0) {
        deg += 360.0;
    }
    return std::min(2, static_cast<int>(deg / 120.0));
}

double clusterCoverageRadius(double cell_radius) { return (std::numbers::sqrt3 + 1.0) * cell_radius; }

} // namespace

double horizontalDistance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double distance3d(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z); }

int CellGrid::cellAt(const Point& p) const
{
    int best = -1;
    double best_d = 0.0;
    for (const auto& c : cells) {
        const double d = horizontalDistance(c.center, p);
        if (best < 0 || d < best_d) {
            best = c.id;
            best_d = d;
        }
    }
    return best;
}

CellGrid buildGrid(int n_clusters, int cells_per_cluster, double cell_radius_m)
{
    if ((n_clusters != 1 && n_clusters != 7) || (cells_per_cluster != 1 && cells_per_cluster != 7)) {
        throw ConfigError("hex layouts support 1 or 7 clusters of 1 or 7 cells");
    }
    if (!(cell_radius_m > 0.0)) {
        throw ConfigError("cell radius must be positive");
    }
    const double pitch = std::numbers::sqrt3 * cell_radius_m;
    // Reuse-7 clusters tile with centers offset by 2 steps + 1 step at 60 degrees.
    const std::vector<Axial> cluster_offsets = flower(cells_per_cluster == 7 ? Axial{2, 1} : Axial{1, 0});
    const std::vector<Axial> cell_offsets = flower(Axial{1, 0});

    CellGrid grid;
    grid.cell_radius_m = cell_radius_m;
    grid.cells_per_cluster = cells_per_cluster;
    for (int c = 0; c < n_clusters; ++c) {
        const Axial base = cluster_offsets[static_cast<std::size_t>(c)];
        grid.cluster_centers.push_back(toCartesian(base, pitch));
        for (int j = 0; j < cells_per_cluster; ++j) {
            const Axial off = cell_offsets[static_cast<std::size_t>(j)];
            grid.cells.push_back(
                {c * cells_per_cluster + j, c, toCartesian({base.q + off.q, base.r + off.r}, pitch)});
        }
    }
    return grid;
}

AssociationPolicy parseAssociationPolicy(std::string_view name)
{
    if (name == "nearest-distance") {
        return AssociationPolicy::NearestDistance;
    }
    if (name == "max-sinr") {
        return AssociationPolicy::MaxSinr;
    }
    if (name == "priority-latency") {
        return AssociationPolicy::PriorityLatency;
    }
    if (name == "load-threshold-offload") {
        return AssociationPolicy::LoadThresholdOffload;
    }
    throw ConfigError("unknown association policy '" + std::string(name) + "'");
}

std::string associationPolicyName(AssociationPolicy policy)
{
    switch (policy) {
    case AssociationPolicy::NearestDistance:
        return "nearest-distance";
    case AssociationPolicy::MaxSinr:
        return "max-sinr";
    case AssociationPolicy::PriorityLatency:
        return "priority-latency";
    case AssociationPolicy::LoadThresholdOffload:
        return "load-threshold-offload";
    }
    return "unknown";
}

double linkSnr(const Station& station, const GroundUser& user, const LinkModel& link)
{
    const double exponent = station.kind == StationKind::Tbs ? link.tbs_exponent : link.abs_exponent;
    const double d = std::max(1.0, distance3d(station.position, user.position));
    return station.tx_power_w * link.reference_gain * std::pow(d, -exponent) / link.noise_power_w;
}

std::vector<int> associate(std::span<const GroundUser> users, std::span<const Station> stations,
                           AssociationPolicy policy, const LinkModel& link)
{
    const std::size_t n_users = users.size();
    const std::size_t n_stations = stations.size();

    std::vector<double> snr(n_users * n_stations, 0.0);
    auto snr_at = [&](std::size_t u, std::size_t s) -> double& { return snr[u * n_stations + s]; };
    for (std::size_t u = 0; u < n_users; ++u) {
        for (std::size_t s = 0; s < n_stations; ++s) {
            snr_at(u, s) = linkSnr(stations[s], users[u], link);
        }
    }

    // Candidate station indices per user, in the policy's preference order.
    std::vector<std::vector<std::size_t>> candidates(n_users);
    for (std::size_t u = 0; u < n_users; ++u) {
        std::vector<std::size_t> tbs;
        std::vector<std::size_t> abs;
        for (std::size_t s = 0; s < n_stations; ++s) {
            const Station& st = stations[s];
            if (!st.operational || st.capacity <= 0 ||
                horizontalDistance(st.position, users[u].position) > st.coverage_radius_m) {
                continue;
            }
            (st.kind == StationKind::Tbs ? tbs : abs).push_back(s);
        }
        auto by_snr = [&](std::size_t a, std::size_t b) {
            const double sa = snr_at(u, a);
            const double sb = snr_at(u, b);
            return sa != sb ? sa > sb : stations[a].id < stations[b].id;
        };
        auto by_distance = [&](std::size_t a, std::size_t b) {
            const double da = distance3d(stations[a].position, users[u].position);
            const double db = distance3d(stations[b].position, users[u].position);
            return da != db ? da < db : stations[a].id < stations[b].id;
        };
        std::vector<std::size_t>& list = candidates[u];
        switch (policy) {
        case AssociationPolicy::NearestDistance:
            list = tbs;
            list.insert(list.end(), abs.begin(), abs.end());
            std::sort(list.begin(), list.end(), by_distance);
            break;
        case AssociationPolicy::MaxSinr:
            list = tbs;
            list.insert(list.end(), abs.begin(), abs.end());
            std::sort(list.begin(), list.end(), by_snr);
            break;
        case AssociationPolicy::PriorityLatency:
        case AssociationPolicy::LoadThresholdOffload: {
            std::sort(tbs.begin(), tbs.end(), by_snr);
            std::sort(abs.begin(), abs.end(), by_snr);
            const bool abs_first =
                policy == AssociationPolicy::PriorityLatency && users[u].latency == LatencyClass::Relaxed;
            list = abs_first ? abs : tbs;
            const auto& rest = abs_first ? tbs : abs;
            list.insert(list.end(), rest.begin(), rest.end());
            break;
        }
        }
    }

    if (policy == AssociationPolicy::LoadThresholdOffload) {
        // A TBS whose demand passes the threshold sheds every user the ABS
        // serves at least as well; plain overflow is left to the capacity pass.
        std::vector<int> demand(n_stations, 0);
        for (const auto& list : candidates) {
            if (!list.empty() && stations[list.front()].kind == StationKind::Tbs) {
                ++demand[list.front()];
            }
        }
        for (std::size_t u = 0; u < n_users; ++u) {
            auto& list = candidates[u];
            if (list.empty() || stations[list.front()].kind != StationKind::Tbs) {
                continue;
            }
            const std::size_t home = list.front();
            if (demand[home] <= link.load_threshold * stations[home].capacity) {
                continue;
            }
            auto first_abs = std::find_if(list.begin(), list.end(),
                                          [&](std::size_t s) { return stations[s].kind == StationKind::Abs; });
            if (first_abs != list.end() && snr_at(u, *first_abs) >= snr_at(u, home)) {
                std::rotate(list.begin(), first_abs, list.end());
            }
        }
    }

    // Capacity-constrained deferred acceptance; stations keep their
    // highest-SNR applicants.
    std::vector<std::size_t> next(n_users, 0);
    std::vector<int> held(n_users, -1);
    std::vector<std::vector<std::size_t>> admitted(n_stations);
    bool proposals = true;
    while (proposals) {
        proposals = false;
        for (std::size_t u = 0; u < n_users; ++u) {
            if (held[u] < 0 && next[u] < candidates[u].size()) {
                const std::size_t s = candidates[u][next[u]++];
                admitted[s].push_back(u);
                held[u] = static_cast<int>(s);
                proposals = true;
            }
        }
        for (std::size_t s = 0; s < n_stations; ++s) {
            auto& list = admitted[s];
            const auto cap = static_cast<std::size_t>(std::max(0, stations[s].capacity));
            if (list.size() <= cap) {
                continue;
            }
            std::sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
                const double sa = snr_at(a, s);
                const double sb = snr_at(b, s);
                return sa != sb ? sa > sb : users[a].id < users[b].id;
            });
            for (std::size_t i = cap; i < list.size(); ++i) {
                held[list[i]] = -1;
            }
            list.resize(cap);
        }
    }

    std::vector<int> out(n_users, kUncovered);
    for (std::size_t u = 0; u < n_users; ++u) {
        if (held[u] >= 0) {
            out[u] = stations[static_cast<std::size_t>(held[u])].id;
        }
    }
    return out;
}

UavSchedule uavRotation(int n_uavs, const CellGrid& grid, double dwell_s)
{
    if (n_uavs < 1) {
        throw ConfigError("at least one UAV is required");
    }
    if (!(dwell_s >= 0.0)) {
        throw ConfigError("dwell time must be nonnegative");
    }
    const int n_clusters = grid.clusters();
    if (n_clusters < 1) {
        throw ConfigError("grid has no clusters");
    }

    UavSchedule s;
    s.n_uavs = n_uavs;
    s.dwell_s = dwell_s;
    for (const auto& c : grid.cluster_centers) {
        s.sector_of_cluster.push_back(sectorOf(c));
    }
    s.sweep_order.resize(static_cast<std::size_t>(n_clusters));
    std::iota(s.sweep_order.begin(), s.sweep_order.end(), 0);
    auto rank = [&](int c) {
        const int sec = s.sector_of_cluster[static_cast<std::size_t>(c)];
        return sec < 0 ? 3 : sec;
    };
    std::stable_sort(s.sweep_order.begin(), s.sweep_order.end(),
                     [&](int a, int b) { return rank(a) != rank(b) ? rank(a) < rank(b) : a < b; });

    const int phases = (n_clusters + n_uavs - 1) / n_uavs;
    s.allocations.assign(static_cast<std::size_t>(n_clusters), 0);
    s.phases_covered.assign(static_cast<std::size_t>(n_clusters), 0);
    for (int t = 0; t < phases; ++t) {
        UavPhase phase;
        std::vector<char> seen(static_cast<std::size_t>(n_clusters), 0);
        for (int u = 0; u < n_uavs; ++u) {
            const int c = s.sweep_order[static_cast<std::size_t>((t * n_uavs + u) % n_clusters)];
            phase.cluster_of_uav.push_back(c);
            ++s.allocations[static_cast<std::size_t>(c)];
            if (!seen[static_cast<std::size_t>(c)]) {
                seen[static_cast<std::size_t>(c)] = 1;
                ++s.phases_covered[static_cast<std::size_t>(c)];
            }
        }
        phase.active_sector = s.sector_of_cluster[static_cast<std::size_t>(phase.cluster_of_uav.front())];
        s.phases.push_back(std::move(phase));
    }
    for (int c = 0; c < n_clusters; ++c) {
        const int covered = s.phases_covered[static_cast<std::size_t>(c)];
        s.duty_cycle.push_back(static_cast<double>(covered) / phases);
        s.worst_wait_s.push_back((phases - covered) * dwell_s);
    }
    return s;
}

const Station& World::station(int id) const
{
    for (const auto& s : stations) {
        if (s.id == id) {
            return s;
        }
    }
    throw ConfigError("unknown station id " + std::to_string(id));
}

World reassociate(World world)
{
    world.association = associate(world.users, world.stations, world.policy, world.link);
    world.association_current = true;
    return world;
}

World applyFailure(World world, std::span<const int> failed_ids)
{
    for (int id : failed_ids) {
        auto it = std::find_if(world.stations.begin(), world.stations.end(),
                               [id](const Station& s) { return s.id == id; });
        if (it == world.stations.end()) {
            throw ConfigError("cannot fail unknown station id " + std::to_string(id));
        }
        it->operational = false;
    }
    if (!failed_ids.empty()) {
        world.association_current = false;
    }
    return world;
}

CoverageReport coverageReport(const World& world, const UavSchedule* schedule)
{
    if (!world.association_current || world.association.size() != world.users.size()) {
        throw std::logic_error("coverage report needs a current association");
    }
    const int n_clusters = world.grid.clusters();
    CoverageReport report;
    report.total_users = static_cast<int>(world.users.size());
    report.clusters.resize(static_cast<std::size_t>(n_clusters));
    for (int c = 0; c < n_clusters; ++c) {
        report.clusters[static_cast<std::size_t>(c)].cluster = c;
    }
    report.station_load.assign(world.stations.size(), 0);
    for (const auto& s : world.stations) {
        if (!s.operational) {
            report.failed_stations.push_back(s.id);
        }
    }

    std::vector<double> wait_total(static_cast<std::size_t>(n_clusters), 0.0);
    for (std::size_t u = 0; u < world.users.size(); ++u) {
        const int cell = world.grid.cellAt(world.users[u].position);
        const int cluster = world.grid.cells[static_cast<std::size_t>(cell)].cluster;
        auto& cc = report.clusters[static_cast<std::size_t>(cluster)];
        ++cc.users;
        const int sid = world.association[u];
        if (sid == kUncovered) {
            ++cc.uncovered;
            ++report.total_uncovered;
            continue;
        }
        ++cc.covered;
        const auto idx = static_cast<std::size_t>(
            std::find_if(world.stations.begin(), world.stations.end(), [sid](const Station& s) { return s.id == sid; }) -
            world.stations.begin());
        ++report.station_load[idx];
        const Station& st = world.stations[idx];
        if (!(st.kind == StationKind::Tbs && st.id == cell)) {
            report.offloaded_users.push_back(world.users[u].id);
        }
        double wait = 0.0;
        if (schedule != nullptr && st.kind == StationKind::Abs && st.rotating && st.cluster >= 0 &&
            st.cluster < static_cast<int>(schedule->worst_wait_s.size())) {
            wait = schedule->worst_wait_s[static_cast<std::size_t>(st.cluster)];
        }
        wait_total[static_cast<std::size_t>(cluster)] += wait;
        cc.max_wait_s = std::max(cc.max_wait_s, wait);
    }
    for (auto& cc : report.clusters) {
        cc.covered_fraction = cc.users > 0 ? static_cast<double>(cc.covered) / cc.users : 1.0;
        cc.mean_wait_s = cc.covered > 0 ? wait_total[static_cast<std::size_t>(cc.cluster)] / cc.covered : 0.0;
    }
    return report;
}

void ScenarioParams::validate() const
{
    if (users_per_cell < 0 || event_users < 0) {
        throw ConfigError("user counts must be nonnegative");
    }
    if (!(responder_fraction >= 0.0 && responder_fraction <= 1.0) ||
        !(tight_latency_fraction >= 0.0 && tight_latency_fraction <= 1.0)) {
        throw ConfigError("user class fractions must lie in [0, 1]");
    }
    if (tbs_capacity < 0 || abs_capacity < 0) {
        throw ConfigError("station capacities must be nonnegative");
    }
    if (!(abs_altitude_m > 0.0)) {
        throw ConfigError("ABS altitude must be positive");
    }
    if (!(tbs_power_w > 0.0) || !(abs_power_w > 0.0)) {
        throw ConfigError("transmit powers must be positive");
    }
    if (outage_cluster < 0 || outage_cluster >= n_clusters) {
        throw ConfigError("outage_cluster must name an existing cluster");
    }
    if (!(link.noise_power_w > 0.0) || !(link.load_threshold > 0.0)) {
        throw ConfigError("link noise and load threshold must be positive");
    }
}

World makeBaseWorld(const ScenarioParams& params, std::uint64_t seed)
{
    params.validate();
    World world;
    world.grid = buildGrid(params.n_clusters, params.cells_per_cluster, params.cell_radius_m);
    world.link = params.link;
    for (const auto& cell : world.grid.cells) {
        Station tbs;
        tbs.id = cell.id;
        tbs.kind = StationKind::Tbs;
        tbs.position = cell.center;
        tbs.tx_power_w = params.tbs_power_w;
        tbs.capacity = params.tbs_capacity;
        tbs.coverage_radius_m = params.cell_radius_m;
        tbs.cluster = cell.cluster;
        world.stations.push_back(tbs);
    }

    auto rng = makeRng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::bernoulli_distribution responder(params.responder_fraction);
    std::bernoulli_distribution tight(params.tight_latency_fraction);
    const double inscribed = params.cell_radius_m * std::numbers::sqrt3 / 2.0;
    for (const auto& cell : world.grid.cells) {
        for (int i = 0; i < params.users_per_cell; ++i) {
            const double r = inscribed * std::sqrt(unit(rng));
            const double theta = 2.0 * std::numbers::pi * unit(rng);
            GroundUser u;
            u.id = static_cast<int>(world.users.size());
            u.position = {cell.center.x + r * std::cos(theta), cell.center.y + r * std::sin(theta), 0.0};
            u.priority = responder(rng) ? UserClass::Responder : UserClass::Civilian;
            u.latency = tight(rng) ? LatencyClass::Tight : LatencyClass::Relaxed;
            world.users.push_back(u);
        }
    }
    return world;
}

std::vector<std::string> scenarioPresets()
{
    return {std::string(kScenarioSingleFailure), std::string(kScenarioClusterOutage),
            std::string(kScenarioEventOffload)};
}

ScenarioOutcome runScenario(std::string_view preset, const ScenarioParams& params, std::uint64_t seed)
{
    if (preset != kScenarioSingleFailure && preset != kScenarioClusterOutage && preset != kScenarioEventOffload) {
        throw ConfigError("unknown scenario preset '" + std::string(preset) + "'");
    }
    ScenarioOutcome out;
    out.preset = std::string(preset);
    World world = makeBaseWorld(params, seed);
    const int next_id = static_cast<int>(world.stations.size());

    auto hovering = [&](int id, const Point& over, double coverage, int cluster, bool rotating) {
        Station abs;
        abs.id = id;
        abs.kind = StationKind::Abs;
        abs.position = {over.x, over.y, params.abs_altitude_m};
        abs.tx_power_w = params.abs_power_w;
        abs.capacity = params.abs_capacity;
        abs.coverage_radius_m = coverage;
        abs.cluster = cluster;
        abs.rotating = rotating;
        return abs;
    };

    if (preset == kScenarioSingleFailure) {
        const Cell& failed = world.grid.cells.front();
        world.policy = AssociationPolicy::MaxSinr;
        world.stations.push_back(hovering(next_id, failed.center, params.cell_radius_m, failed.cluster, false));
        const int ids[] = {failed.id};
        world = applyFailure(std::move(world), ids);
    } else if (preset == kScenarioClusterOutage) {
        world.policy = AssociationPolicy::MaxSinr;
        std::vector<int> ids;
        for (const auto& cell : world.grid.cells) {
            if (cell.cluster == params.outage_cluster) {
                ids.push_back(cell.id);
            }
        }
        world.stations.push_back(
            hovering(next_id, world.grid.cluster_centers[static_cast<std::size_t>(params.outage_cluster)],
                     clusterCoverageRadius(params.cell_radius_m), params.outage_cluster, true));
        world = applyFailure(std::move(world), ids);
        out.schedule = uavRotation(params.uavs, world.grid, params.dwell_s);
    } else {
        // Crowd packed around the first cell's base station.
        world.policy = AssociationPolicy::LoadThresholdOffload;
        const Cell& venue = world.grid.cells.front();
        auto rng = makeRng(deriveSeed(seed, 3));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int i = 0; i < params.event_users; ++i) {
            const double r = 0.5 * params.cell_radius_m * std::sqrt(unit(rng));
            const double theta = 2.0 * std::numbers::pi * unit(rng);
            GroundUser u;
            u.id = static_cast<int>(world.users.size());
            u.position = {venue.center.x + r * std::cos(theta), venue.center.y + r * std::sin(theta), 0.0};
            world.users.push_back(u);
        }
        world.stations.push_back(hovering(next_id, venue.center, params.cell_radius_m, venue.cluster, false));
    }

    out.world = reassociate(std::move(world));
    out.report = coverageReport(out.world, out.schedule ? &*out.schedule : nullptr);
    return out;
}

} // namespace sagin
