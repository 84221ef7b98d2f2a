// SPDX-License-Identifier: Apache-2.0
//
// Hexagonal cell layout, station/user association, base station failures and
// the rotating UAV schedule that gives intermittent cluster coverage.

#pragma once

#include "sagin/ao.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sagin {

struct Point
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

double horizontalDistance(const Point& a, const Point& b);
double distance3d(const Point& a, const Point& b);

struct Cell
{
    int id = 0;
    int cluster = 0;
    Point center;
};

struct CellGrid
{
    double cell_radius_m = 0.0;
    int cells_per_cluster = 0;
    std::vector<Point> cluster_centers;
    std::vector<Cell> cells;

    int clusters() const { return static_cast<int>(cluster_centers.size()); }
    // Cell whose center is nearest to p (lowest id on ties).
    int cellAt(const Point& p) const;
};

// Flower layouts only: 1 or 7 clusters of 1 or 7 cells. Neighbouring cell
// centers are sqrt(3) * radius apart. Cluster 0 / cell 0 sit at the origin.
CellGrid buildGrid(int n_clusters, int cells_per_cluster, double cell_radius_m);

enum class StationKind { Tbs, Abs };

struct Station
{
    int id = 0;
    StationKind kind = StationKind::Tbs;
    Point position;
    double tx_power_w = 20.0;
    int capacity = 0;
    bool operational = true;
    double coverage_radius_m = 0.0;
    int cluster = -1;      // home cluster (TBS) or served cluster (ABS)
    bool rotating = false; // ABS present only while the UAV rotation visits its cluster

    friend bool operator==(const Station&, const Station&) = default;
};

enum class LatencyClass { Tight, Relaxed };

struct GroundUser
{
    int id = 0;
    Point position;
    UserClass priority = UserClass::Civilian;
    LatencyClass latency = LatencyClass::Relaxed;

    friend bool operator==(const GroundUser&, const GroundUser&) = default;
};

enum class AssociationPolicy { NearestDistance, MaxSinr, PriorityLatency, LoadThresholdOffload };

AssociationPolicy parseAssociationPolicy(std::string_view name);
std::string associationPolicyName(AssociationPolicy policy);

struct LinkModel
{
    double noise_power_w = 1e-13;
    double tbs_exponent = 2.0;
    double abs_exponent = 2.0;
    double reference_gain = 1.0; // gain at 1 m
    double load_threshold = 0.9; // fraction of capacity that triggers offload

    friend bool operator==(const LinkModel&, const LinkModel&) = default;
};

// Interference-free SNR of the station's signal at the user.
double linkSnr(const Station& station, const GroundUser& user, const LinkModel& link);

inline constexpr int kUncovered = -1;

// Station id per user, kUncovered when no operational station in range has
// room. Stations admit their highest-SNR applicants up to capacity; overflow
// users move to their next candidate under the policy's ordering.
std::vector<int> associate(std::span<const GroundUser> users, std::span<const Station> stations,
                           AssociationPolicy policy, const LinkModel& link);

struct UavPhase
{
    int active_sector = 0;         // sector of the first cluster visited; -1 for the center
    std::vector<int> cluster_of_uav;
};

struct UavSchedule
{
    int n_uavs = 0;
    double dwell_s = 0.0;
    std::vector<int> sector_of_cluster; // 0..2 by 120 degree sector, -1 for the center cluster
    std::vector<int> sweep_order;
    std::vector<UavPhase> phases;         // one full rotation
    std::vector<int> allocations;         // UAV-phases spent on each cluster
    std::vector<int> phases_covered;      // distinct phases with a UAV over each cluster
    std::vector<double> duty_cycle;       // phases_covered / phases
    std::vector<double> worst_wait_s;     // (phases - phases_covered) * dwell

    int totalPhases() const { return static_cast<int>(phases.size()); }
};

// Clusters are swept sector by sector (lowest id first within a sector, the
// center cluster last). Each phase the UAVs take the next clusters of the
// sweep, wrapping to its start, so every UAV-phase is spent on some cluster.
UavSchedule uavRotation(int n_uavs, const CellGrid& grid, double dwell_s);

struct World
{
    CellGrid grid;
    std::vector<Station> stations;
    std::vector<GroundUser> users;
    AssociationPolicy policy = AssociationPolicy::MaxSinr;
    LinkModel link;
    std::vector<int> association; // empty until associated
    bool association_current = false;

    const Station& station(int id) const;
};

// Re-runs association with the world's policy.
World reassociate(World world);

// Marks the stations non-operational and invalidates the association.
// Throws ConfigError on unknown ids.
World applyFailure(World world, std::span<const int> failed_ids);

struct ClusterCoverage
{
    int cluster = 0;
    int users = 0;
    int covered = 0;
    int uncovered = 0;
    double covered_fraction = 1.0;
    double mean_wait_s = 0.0;
    double max_wait_s = 0.0;
};

struct CoverageReport
{
    std::vector<ClusterCoverage> clusters;
    std::vector<int> failed_stations;
    std::vector<int> offloaded_users; // covered by a station other than their cell's TBS
    std::vector<int> station_load;    // users per station, indexed like World::stations
    int total_users = 0;
    int total_uncovered = 0;
};

// Users on a rotating ABS wait for the UAV to return: their latency is the
// cluster's worst-case wait. Requires a current association.
CoverageReport coverageReport(const World& world, const UavSchedule* schedule);

struct ScenarioParams
{
    int n_clusters = 7;
    int cells_per_cluster = 7;
    double cell_radius_m = 500.0;
    int users_per_cell = 10;
    double responder_fraction = 0.1;
    double tight_latency_fraction = 0.3;
    double tbs_power_w = 20.0;
    int tbs_capacity = 40;
    double abs_power_w = 20.0;
    int abs_capacity = 100;
    double abs_altitude_m = 120.0;
    int uavs = 3;
    double dwell_s = 60.0;
    int event_users = 60;
    int outage_cluster = 1;
    LinkModel link;

    void validate() const;

    friend bool operator==(const ScenarioParams&, const ScenarioParams&) = default;
};

// Grid, one TBS per cell and users spread uniformly over each cell's
// inscribed disc. Not yet associated.
World makeBaseWorld(const ScenarioParams& params, std::uint64_t seed);

struct ScenarioOutcome
{
    std::string preset;
    World world;
    std::optional<UavSchedule> schedule;
    CoverageReport report;
};

inline constexpr std::string_view kScenarioSingleFailure = "scenario1-single-failure";
inline constexpr std::string_view kScenarioClusterOutage = "scenario2-cluster-outage";
inline constexpr std::string_view kScenarioEventOffload = "scenario3-event-offload";

std::vector<std::string> scenarioPresets();

// Throws ConfigError for unknown preset names.
ScenarioOutcome runScenario(std::string_view preset, const ScenarioParams& params, std::uint64_t seed);

} // namespace sagin
